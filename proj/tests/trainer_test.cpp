// Copyright 2026 The vfdenoise Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "support/gradcheck.hpp"
#include "support/memorize.hpp"
#include "vfd/neural/adam.hpp"
#include "vfd/neural/checkpoint.hpp"
#include "vfd/neural/trainer.hpp"
#include "vfd/simulator.hpp"

namespace vfd::nn {
namespace {

std::vector<DenseLayer> small_layers(Rng& rng) {
  std::vector<DenseLayer> layers;
  layers.emplace_back("a", 3, 4, Activation::ReLU);
  layers.emplace_back("b", 4, 2, Activation::Identity);
  for (DenseLayer& l : layers) l.init_glorot(rng);
  return layers;
}

Gradients random_gradients(const std::vector<DenseLayer>& layers, Rng& rng) {
  Gradients g = zero_gradients(layers);
  for (DenseGrad& lg : g) {
    for (double& w : lg.weights) w = 2 * rng.uniform() - 1;
    for (double& b : lg.bias) b = 2 * rng.uniform() - 1;
  }
  return g;
}

TEST(AdamTest, ZeroGradientLeavesParametersAndAdvancesStep) {
  Rng rng(1);
  auto layers = small_layers(rng);
  const auto before = layers;
  AdamState state(layers);
  adam_step(layers, zero_gradients(layers), state, 1e-3);
  EXPECT_EQ(layers, before);
  EXPECT_EQ(state.step, 1);
}

// After one step m_hat = g and v_hat = g^2, so the update is
// -lr * g / (|g| + eps): magnitude just under lr, direction -sign(g).
TEST(AdamTest, FirstStepClosedForm) {
  Rng rng(2);
  auto layers = small_layers(rng);
  const auto before = layers;
  const Gradients g = random_gradients(layers, rng);
  AdamState state(layers);
  const double lr = 1e-4;
  adam_step(layers, g, state, lr);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t k = 0; k < g[l].weights.size(); ++k) {
      const double gk = g[l].weights[k];
      const double delta = layers[l].weights[k] - before[l].weights[k];
      EXPECT_NEAR(delta, -lr * gk / (std::abs(gk) + 1e-8), 1e-15);
      EXPECT_EQ(std::signbit(delta), !std::signbit(gk));
      EXPECT_NEAR(std::abs(delta), lr, 1e-4 * lr);
    }
  }
}

TEST(AdamTest, TwoStepsMatchHandRolledMoments) {
  Rng rng(3);
  auto layers = small_layers(rng);
  const auto before = layers;
  const Gradients g1 = random_gradients(layers, rng);
  const Gradients g2 = random_gradients(layers, rng);
  AdamState state(layers);
  const double lr = 1e-2;
  adam_step(layers, g1, state, lr);
  adam_step(layers, g2, state, lr);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t k = 0; k < g1[l].bias.size(); ++k) {
      double p = before[l].bias[k], m = 0, v = 0;
      int t = 0;
      for (double gk : {g1[l].bias[k], g2[l].bias[k]}) {
        ++t;
        m = b1 * m + (1 - b1) * gk;
        v = b2 * v + (1 - b2) * gk * gk;
        const double mh = m / (1 - std::pow(b1, t));
        const double vh = v / (1 - std::pow(b2, t));
        p -= lr * mh / (std::sqrt(vh) + eps);
      }
      EXPECT_NEAR(layers[l].bias[k], p, 1e-14);
    }
  }
}

TEST(AdamTest, Deterministic) {
  Rng rng(4);
  auto a = small_layers(rng);
  auto b = a;
  const Gradients g = random_gradients(a, rng);
  AdamState sa(a), sb(b);
  adam_step(a, g, sa, 1e-3);
  adam_step(b, g, sb, 1e-3);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(sa == sb);
}

TEST(PlateauSchedulerTest, SixFlatEpochsCutRateTenfold) {
  PlateauScheduler s(1e-4, 0.1, 5, 1e-4);
  s.step(1.0);
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(s.step(1.0), 1e-4);
  EXPECT_NEAR(s.step(1.0), 1e-5, 1e-20);
  EXPECT_EQ(s.bad_epochs(), 0);
}

TEST(PlateauSchedulerTest, ImprovementResetsCounter) {
  PlateauScheduler s(1e-4, 0.1, 5, 1e-4);
  s.step(1.0);
  for (int k = 0; k < 5; ++k) s.step(1.0);
  EXPECT_EQ(s.bad_epochs(), 5);
  s.step(0.5);
  EXPECT_EQ(s.bad_epochs(), 0);
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(s.step(0.6), 1e-4);
  // Relative threshold: a gain smaller than 1e-4 of the best is not progress.
  EXPECT_NEAR(s.step(0.5 * (1 - 1e-5)), 1e-5, 1e-20);
}

TEST(TrainConfigTest, ValidationAndHash) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  TrainConfig bad = cfg;
  bad.batch_size = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.val_fraction = 0.2;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.mask_count = 52;
  EXPECT_THROW(bad.validate(), std::invalid_argument);

  const Variant mae{ModelKind::MAE, false};
  EXPECT_EQ(cfg.hash(mae), TrainConfig{}.hash(mae));
  EXPECT_NE(cfg.hash(mae), cfg.hash({ModelKind::MAE, true}));
  TrainConfig other = cfg;
  other.seed = 43;
  EXPECT_NE(cfg.hash(mae), other.hash(mae));
}

TEST(SplitTest, DisjointCoveringAndProportional) {
  const TrainConfig cfg;
  const EyeSplit s = split_by_eye(1880, cfg);
  EXPECT_EQ(s.train.size(), 1316u);
  EXPECT_EQ(s.val.size(), 282u);
  EXPECT_EQ(s.test.size(), 282u);
  std::set<std::size_t> all;
  for (const auto* part : {&s.train, &s.val, &s.test}) all.insert(part->begin(), part->end());
  EXPECT_EQ(all.size(), 1880u);
  EXPECT_EQ(*all.rbegin(), 1879u);
  const EyeSplit again = split_by_eye(1880, cfg);
  EXPECT_EQ(again.train, s.train);
}

std::vector<VisualField> small_dataset(int eyes, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::MediumProgression;
  spec.n_eyes = eyes;
  std::vector<VisualField> out;
  for (const EyeSeries& e :
       simulate_cohort(spec, seed, NoiseModel{}, standard_normative())) {
    out.insert(out.end(), e.exams.begin(), e.exams.end());
  }
  return out;
}

TEST(FitTest, RejectsEmptySplits) {
  const auto data = small_dataset(2, 1);
  const Variant v{ModelKind::MAE, false};
  EXPECT_THROW(fit(v, {}, data, TrainConfig{}), std::invalid_argument);
  EXPECT_THROW(fit(v, data, {}, TrainConfig{}), std::invalid_argument);
}

TEST(FitTest, DeterministicAndKeepsBestValidationEpoch) {
  const auto train = small_dataset(6, 2);
  const auto val = small_dataset(2, 3);
  TrainConfig cfg;
  cfg.max_epochs = 6;
  cfg.learning_rate = 1e-3;
  for (const Variant& v : kAllVariants) {
    const FitResult a = fit(v, train, val, cfg);
    const FitResult b = fit(v, train, val, cfg);
    EXPECT_TRUE(a.best == b.best) << v.tag();
    ASSERT_EQ(a.history.size(), 6u);
    double best = 1e300;
    int best_epoch = 0;
    for (const EpochLog& log : a.history) {
      EXPECT_EQ(log.train_loss, b.history[log.epoch - 1].train_loss);
      EXPECT_EQ(log.val_loss, b.history[log.epoch - 1].val_loss);
      if (log.val_loss < best) {
        best = log.val_loss;
        best_epoch = log.epoch;
      }
      if (v.kind == ModelKind::MAE) {
        EXPECT_EQ(log.val_kl, 0.0);
      }
    }
    EXPECT_EQ(a.best.epoch, best_epoch);
    EXPECT_EQ(a.best.val_loss, best);
    EXPECT_EQ(a.best.config_hash, cfg.hash(v));
  }
}

TEST(FitTest, ConstantDatasetIsMemorised) {
  const TrainConfig cfg = testing::memorize_config();
  for (const Variant& v : kAllVariants) {
    const testing::MemorizeResult r = testing::memorize(v, cfg);
    EXPECT_LT(r.rmse_db, 0.5) << v.tag();
    if (v.kind == ModelKind::MAE) {
      for (int e = 1; e < 5; ++e) {
        EXPECT_LT(r.history[e].val_recon, r.history[e - 1].val_recon) << v.tag();
      }
      EXPECT_LT(r.history.back().val_recon, 1e-3) << v.tag();
    }
  }
}

TEST(FitTest, IdentityTrainedMaeReproducesInput) {
  TrainConfig cfg = testing::memorize_config();
  cfg.mask_count = 0;
  cfg.max_epochs = 300;
  const testing::MemorizeResult r = testing::memorize({ModelKind::MAE, false}, cfg);
  EXPECT_LT(r.rmse_db, 0.5);
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  Rng rng(12);
  for (const Variant& v : kAllVariants) {
    CheckpointRecord ck{Autoencoder::initialized(v, rng), 17, 0.012345678901234567,
                        TrainConfig{}.hash(v)};
    for (DenseLayer& l : ck.params.layers) l.bias = testing::uniform_vector(rng, l.out, -1, 1);
    std::stringstream ss;
    write_checkpoint(ss, ck);
    const CheckpointRecord back = read_checkpoint(ss);
    EXPECT_TRUE(back == ck) << v.tag();
    const auto x = testing::uniform_vector(rng, v.input_dim(), 0, 1);
    EXPECT_EQ(forward(back.params, x).output, forward(ck.params, x).output);
  }
}

TEST(CheckpointTest, RejectsCorruptFiles) {
  Rng rng(13);
  const Variant v{ModelKind::VAE, true};
  const CheckpointRecord ck{Autoencoder::initialized(v, rng), 1, 0.5, 7};
  std::stringstream ss;
  write_checkpoint(ss, ck);
  const std::string text = ss.str();

  std::stringstream wrong_magic("vfd-checkpoint 2\n" + text.substr(text.find('\n') + 1));
  EXPECT_THROW(read_checkpoint(wrong_magic), DataError);

  std::stringstream truncated(text.substr(0, text.size() / 2));
  EXPECT_THROW(read_checkpoint(truncated), DataError);

  std::string bad_variant = text;
  bad_variant.replace(bad_variant.find("vae+p"), 5, "vae+q");
  std::stringstream bv(bad_variant);
  EXPECT_THROW(read_checkpoint(bv), DataError);

  std::string bad_shape = text;
  bad_shape.replace(bad_shape.find("enc1 104 32"), 11, "enc1 104 31");
  std::stringstream bs(bad_shape);
  EXPECT_THROW(read_checkpoint(bs), DataError);
}

}  // namespace
}  // namespace vfd::nn
