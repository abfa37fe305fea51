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

#include "vfd/neural/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "vfd/neural/adam.hpp"

namespace vfd::nn {
namespace {

struct Encoded {
  std::vector<double> features;
  std::vector<double> target;  // scaled sensitivities
};

std::vector<Encoded> encode_all(const std::vector<VisualField>& fields,
                                bool with_pvalues) {
  std::vector<Encoded> out;
  out.reserve(fields.size());
  for (const VisualField& f : fields) {
    Encoded e;
    e.features = encode_input(f, with_pvalues);
    e.target.assign(e.features.begin(), e.features.begin() + kNumLocations);
    out.push_back(std::move(e));
  }
  return out;
}

// Builds the network input (masked for the MAE) and the VAE noise for one
// training or validation sample.
void prepare(const Variant& v, const Encoded& e, int mask_count, Rng& rng,
             std::vector<double>& input, std::vector<double>& eps) {
  if (v.kind == ModelKind::MAE) {
    input = mask_input(e.features, mask_count, rng).features;
    eps.clear();
  } else {
    input = e.features;
    eps.resize(kLatent);
    for (double& x : eps) x = rng.normal();
  }
}

void shuffle(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.below(i)]);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (!(lr_factor > 0.0 && lr_factor < 1.0)) {
    throw std::invalid_argument("lr_factor must be in (0, 1)");
  }
  if (lr_patience < 0) throw std::invalid_argument("lr_patience must be >= 0");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (train_fraction < 0 || val_fraction < 0 || test_fraction < 0 ||
      std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must be non-negative and sum to 1");
  }
  if (mask_count < 0 || mask_count >= static_cast<int>(kNumLocations)) {
    throw std::invalid_argument("mask_count must be in [0, 52)");
  }
  if (kl_weight < 0) throw std::invalid_argument("kl_weight must be >= 0");
}

std::string TrainConfig::canonical() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "batch_size=%d;learning_rate=%a;lr_factor=%a;lr_patience=%d;"
                "lr_threshold=%a;max_epochs=%d;seed=%llu;split=%a/%a/%a;"
                "mask_count=%d;kl_weight=%a;kl_form=%s",
                batch_size, learning_rate, lr_factor, lr_patience, lr_threshold,
                max_epochs, static_cast<unsigned long long>(seed), train_fraction,
                val_fraction, test_fraction, mask_count, kl_weight,
                kl_form == KlForm::AsPrinted ? "as_printed" : "textbook");
  return buf;
}

std::uint64_t TrainConfig::hash(const Variant& variant) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : variant.tag() + "|" + canonical()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

double PlateauScheduler::step(double val_loss) {
  if (!has_best_ || val_loss < best_ * (1.0 - threshold_)) {
    best_ = val_loss;
    has_best_ = true;
    bad_epochs_ = 0;
  } else if (++bad_epochs_ > patience_) {
    lr_ *= factor_;
    bad_epochs_ = 0;
  }
  return lr_;
}

EyeSplit split_by_eye(std::size_t n_eyes, const TrainConfig& cfg) {
  std::vector<std::size_t> order(n_eyes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::stream(cfg.seed, {5});
  shuffle(order, rng);
  const auto n = static_cast<double>(n_eyes);
  const auto n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * n));
  const auto n_val = std::min(
      n_eyes - n_train, static_cast<std::size_t>(std::llround(cfg.val_fraction * n)));
  EyeSplit s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
               order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  return s;
}

std::vector<VisualField> gather_exams(const std::vector<EyeSeries>& eyes,
                                      const std::vector<std::size_t>& indices) {
  std::vector<VisualField> out;
  for (std::size_t i : indices) {
    const auto& ex = eyes.at(i).exams;
    out.insert(out.end(), ex.begin(), ex.end());
  }
  return out;
}

FitResult fit(Variant variant, const std::vector<VisualField>& train,
              const std::vector<VisualField>& val, const TrainConfig& cfg,
              const std::function<void(const EpochLog&)>& on_epoch) {
  cfg.validate();
  if (train.empty()) throw std::invalid_argument("training split is empty");
  if (val.empty()) throw std::invalid_argument("validation split is empty");

  const auto train_set = encode_all(train, variant.with_pvalues);
  const auto val_set = encode_all(val, variant.with_pvalues);
  const LossConfig loss_cfg{cfg.kl_weight, cfg.kl_form};

  Rng init_rng = Rng::stream(cfg.seed, {1});
  Rng shuffle_rng = Rng::stream(cfg.seed, {2});
  Rng sample_rng = Rng::stream(cfg.seed, {3});

  Autoencoder model = Autoencoder::initialized(variant, init_rng);
  AdamState adam(model.layers);
  Gradients grads = zero_gradients(model.layers);
  PlateauScheduler scheduler(cfg.learning_rate, cfg.lr_factor, cfg.lr_patience,
                             cfg.lr_threshold);

  FitResult result;
  bool have_best = false;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> input, eps;
  const auto batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    log.lr = scheduler.lr();
    shuffle(order, shuffle_rng);

    LossParts epoch_sum;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t n = std::min(batch, order.size() - start);
      for (auto& g : grads) g.zero();
      LossParts batch_loss;
      for (std::size_t j = start; j < start + n; ++j) {
        prepare(variant, train_set[order[j]], cfg.mask_count, sample_rng, input, eps);
        const LossParts p = sample_loss_and_gradients(
            model, input, train_set[order[j]].target, eps, n, loss_cfg, &grads);
        batch_loss.recon += p.recon;
        batch_loss.kl += p.kl;
      }
      adam_step(model.layers, grads, adam, scheduler.lr());
      epoch_sum.recon += batch_loss.recon * static_cast<double>(n);
      epoch_sum.kl += batch_loss.kl * static_cast<double>(n);
    }
    const auto n_train = static_cast<double>(train_set.size());
    log.train_recon = epoch_sum.recon / n_train;
    log.train_kl = epoch_sum.kl / n_train;
    log.train_loss = log.train_recon + cfg.kl_weight * log.train_kl;

    // Fixed validation stream: every epoch sees the same masks / noise.
    Rng val_rng = Rng::stream(cfg.seed, {4});
    LossParts val_sum;
    for (const Encoded& e : val_set) {
      prepare(variant, e, cfg.mask_count, val_rng, input, eps);
      const LossParts p =
          sample_loss_and_gradients(model, input, e.target, eps, 1, loss_cfg, nullptr);
      val_sum.recon += p.recon;
      val_sum.kl += p.kl;
    }
    const auto n_val = static_cast<double>(val_set.size());
    log.val_recon = val_sum.recon / n_val;
    log.val_kl = val_sum.kl / n_val;
    log.val_loss = log.val_recon + cfg.kl_weight * log.val_kl;

    if (!have_best || log.val_loss < result.best.val_loss) {
      result.best = CheckpointRecord{model, epoch, log.val_loss, cfg.hash(variant)};
      have_best = true;
    }
    scheduler.step(log.val_loss);
    result.history.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  return result;
}

}  // namespace vfd::nn
