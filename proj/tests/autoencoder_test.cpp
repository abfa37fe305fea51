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

#include <gtest/gtest.h>

#include "support/gradcheck.hpp"
#include "vfd/neural/autoencoder.hpp"

namespace vfd::nn {
namespace {

TEST(AutoencoderTest, LayerShapes) {
  for (const Variant& v : kAllVariants) {
    const Autoencoder m = Autoencoder::create(v);
    ASSERT_EQ(m.layers.size(), v.kind == ModelKind::MAE ? 5u : 6u);
    EXPECT_EQ(m.layers.front().in, v.with_pvalues ? 104u : 52u);
    EXPECT_EQ(m.layers.front().out, 32u);
    EXPECT_EQ(m.layers[1].out, 16u);
    EXPECT_EQ(m.layers.back().in, 32u);
    EXPECT_EQ(m.layers.back().out, 52u);
    EXPECT_EQ(m.layers.back().activation, Activation::Identity);
    EXPECT_EQ(Variant::parse(v.tag()), v);
  }
  EXPECT_FALSE(Variant::parse("vae+q").has_value());
}

TEST(AutoencoderTest, ZeroParametersGiveZeroOutput) {
  for (const Variant& v : kAllVariants) {
    const Autoencoder m = Autoencoder::create(v);
    const std::vector<double> x(v.input_dim(), 0.7);
    const auto c = forward(m, x);
    for (double y : c.output) EXPECT_EQ(y, 0.0);
  }
}

TEST(AutoencoderTest, ZeroOutputGradientGivesZeroParameterGradient) {
  Rng rng(4);
  const Autoencoder m = Autoencoder::initialized({ModelKind::MAE, true}, rng);
  const auto x = testing::uniform_vector(rng, 104, 0, 1);
  const auto c = forward(m, x);
  Gradients g = zero_gradients(m.layers);
  const std::vector<double> d_out(52, 0.0);
  backward(m, c, d_out, {}, {}, g);
  for (const DenseGrad& lg : g) {
    for (double w : lg.weights) EXPECT_EQ(w, 0.0);
    for (double b : lg.bias) EXPECT_EQ(b, 0.0);
  }
}

TEST(AutoencoderTest, VaeInferenceUsesMean) {
  Rng rng(6);
  const Autoencoder m = Autoencoder::initialized({ModelKind::VAE, false}, rng);
  const auto x = testing::uniform_vector(rng, 52, 0, 1);
  const auto c = forward(m, x);
  EXPECT_EQ(c.z, c.mu);
  for (double s : c.sigma) EXPECT_GT(s, 0.0);
  EXPECT_EQ(forward(m, x).output, c.output);
  const std::vector<double> zero_eps(16, 0.0);
  EXPECT_EQ(forward(m, x, zero_eps).output, c.output);
}

TEST(GradientTest, MaeMatchesFiniteDifferences) {
  EXPECT_LT(testing::model_gradcheck({ModelKind::MAE, false}, KlForm::AsPrinted, 20, 11), 1e-4);
  EXPECT_LT(testing::model_gradcheck({ModelKind::MAE, true}, KlForm::AsPrinted, 20, 12), 1e-4);
}

TEST(GradientTest, VaeMatchesFiniteDifferences) {
  for (KlForm form : {KlForm::AsPrinted, KlForm::Textbook}) {
    EXPECT_LT(testing::model_gradcheck({ModelKind::VAE, false}, form, 20, 13), 1e-4);
    EXPECT_LT(testing::model_gradcheck({ModelKind::VAE, true}, form, 20, 14), 1e-4);
  }
}

TEST(KlLossTest, Examples) {
  EXPECT_DOUBLE_EQ(kl_loss(std::vector{0.0}, std::vector{1.0}, 1), 0.5);
  EXPECT_DOUBLE_EQ(kl_loss(std::vector{1.0}, std::vector{1.0}, 1), 1.5);
  EXPECT_DOUBLE_EQ(kl_loss(std::vector{0.0}, std::vector{1.0}, 1, KlForm::Textbook), 0.0);
  EXPECT_THROW(kl_loss(std::vector{0.0}, std::vector{0.0}, 1), std::invalid_argument);
  EXPECT_THROW(kl_loss(std::vector{0.0}, std::vector{-1.0}, 1), std::invalid_argument);
}

TEST(KlLossTest, BatchMean) {
  Rng rng(21);
  const auto mu = testing::uniform_vector(rng, 16, -1, 1);
  const auto sigma = testing::uniform_vector(rng, 16, 0.2, 2);
  std::vector<double> mu2 = mu, sigma2 = sigma;
  mu2.insert(mu2.end(), mu.begin(), mu.end());
  sigma2.insert(sigma2.end(), sigma.begin(), sigma.end());
  EXPECT_NEAR(kl_loss(mu2, sigma2, 2), kl_loss(mu, sigma, 1), 1e-12);

  double brute = 0.0;
  for (std::size_t d = 0; d < 16; ++d) {
    brute += sigma[d] * sigma[d] + mu[d] * mu[d] - std::log(sigma[d]) - 0.5;
  }
  EXPECT_NEAR(kl_loss(mu, sigma, 1), brute, 1e-12);
}

TEST(KlLossTest, PerDimensionMinimumAtInverseRootTwo) {
  double best_sigma = 0.0, best = 1e300;
  for (int k = 1; k <= 200000; ++k) {
    const double s = 1e-5 * k;
    const double v = kl_loss(std::vector{0.0}, std::vector{s}, 1);
    if (v < best) {
      best = v;
      best_sigma = s;
    }
  }
  EXPECT_NEAR(best_sigma, 1.0 / std::sqrt(2.0), 1e-5);
  EXPECT_NEAR(best, 0.5 * std::log(2.0), 1e-9);
}

// Direct partial derivatives of the KL term alone: dKL/dmu = 2 mu / N and
// dKL/dlog(sigma) = (2 sigma^2 - 1) / N as printed.
TEST(KlLossTest, AnalyticPartialsMatchFiniteDifferences) {
  Rng rng(31);
  const std::size_t n = 3;
  for (int trial = 0; trial < 20; ++trial) {
    auto mu = testing::uniform_vector(rng, 16 * n, -2, 2);
    auto log_sigma = testing::uniform_vector(rng, 16 * n, -1.5, 1.0);
    auto kl_of = [&](const std::vector<double>& m, const std::vector<double>& ls) {
      std::vector<double> s(ls.size());
      for (std::size_t i = 0; i < ls.size(); ++i) s[i] = std::exp(ls[i]);
      return kl_loss(m, s, n);
    };
    for (std::size_t i = 0; i < mu.size(); ++i) {
      auto hi = mu, lo = mu;
      hi[i] += testing::kFdStep;
      lo[i] -= testing::kFdStep;
      const double fd = (kl_of(hi, log_sigma) - kl_of(lo, log_sigma)) / (2 * testing::kFdStep);
      EXPECT_LT(testing::relative_error(2 * mu[i] / n, fd), 1e-4);

      auto shi = log_sigma, slo = log_sigma;
      shi[i] += testing::kFdStep;
      slo[i] -= testing::kFdStep;
      const double fds = (kl_of(mu, shi) - kl_of(mu, slo)) / (2 * testing::kFdStep);
      const double s2 = std::exp(2 * log_sigma[i]);
      EXPECT_LT(testing::relative_error((2 * s2 - 1) / n, fds), 1e-4);
    }
  }
}

TEST(ReparameterizeTest, DegenerateAndDeterministic) {
  Rng rng(1);
  const auto mu = testing::uniform_vector(rng, 16, -1, 1);
  const std::vector<double> zero(16, 0.0), one(16, 1.0);
  Rng a(77);
  EXPECT_EQ(reparameterize(mu, zero, a), mu);
  Rng b(77), c(77);
  EXPECT_EQ(reparameterize(mu, one, b), reparameterize(mu, one, c));
}

TEST(ReparameterizeTest, StandardNormalMoments) {
  Rng rng(123);
  const std::vector<double> mu(16, 0.0), sigma(16, 1.0);
  std::vector<double> sum(16, 0.0), sum2(16, 0.0);
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const auto z = reparameterize(mu, sigma, rng);
    for (std::size_t d = 0; d < 16; ++d) {
      sum[d] += z[d];
      sum2[d] += z[d] * z[d];
    }
  }
  for (std::size_t d = 0; d < 16; ++d) {
    const double mean = sum[d] / n;
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(sum2[d] / n - mean * mean, 1.0, 0.05);
  }
}

TEST(MaskTest, ZeroCountIsIdentity) {
  Rng rng(2);
  const auto x = testing::uniform_vector(rng, 104, 0.1, 1);
  const Masked m = mask_input(x, 0, rng);
  EXPECT_EQ(m.features, x);
  EXPECT_TRUE(m.indices.empty());
}

TEST(MaskTest, TenDistinctZerosAndPvalueBlockUntouched) {
  Rng rng(3);
  for (int draw = 0; draw < 1000; ++draw) {
    const bool with_p = draw % 2 == 0;
    // Strictly positive inputs so every zero is one the mask introduced.
    const auto x = testing::uniform_vector(rng, with_p ? 104 : 52, 0.01, 1);
    const Masked m = mask_input(x, 10, rng);
    ASSERT_EQ(m.features.size(), x.size());
    ASSERT_EQ(m.indices.size(), 10u);
    ASSERT_TRUE(std::is_sorted(m.indices.begin(), m.indices.end()));
    ASSERT_EQ(std::set<std::size_t>(m.indices.begin(), m.indices.end()).size(), 10u);
    int zeros = 0;
    std::multiset<double> kept;
    for (std::size_t i = 0; i < 52; ++i) {
      if (m.features[i] == 0.0) {
        ++zeros;
        ASSERT_TRUE(std::binary_search(m.indices.begin(), m.indices.end(), i));
      } else {
        ASSERT_EQ(m.features[i], x[i]);
        kept.insert(m.features[i]);
      }
    }
    ASSERT_EQ(zeros, 10);
    ASSERT_EQ(kept.size(), 42u);
    for (std::size_t i = 52; i < x.size(); ++i) ASSERT_EQ(m.features[i], x[i]);
  }
}

TEST(MseLossTest, Examples) {
  Rng rng(9);
  const auto a = testing::uniform_vector(rng, 52, 0, 1);
  EXPECT_EQ(loss_mae(a, a), 0.0);
  auto b = a;
  for (double& v : b) v += 0.1;
  EXPECT_NEAR(loss_mae(b, a), 0.01, 1e-12);
  const auto c = testing::uniform_vector(rng, 52, 0, 1);
  double brute = 0.0;
  for (std::size_t i = 0; i < 52; ++i) brute += (a[i] - c[i]) * (a[i] - c[i]);
  EXPECT_NEAR(loss_mae(a, c), brute / 52, 1e-15);
}

TEST(DenoiseTest, ClampedDeterministicAndLengthChecked) {
  Rng rng(10);
  for (const Variant& v : kAllVariants) {
    Autoencoder m = Autoencoder::initialized(v, rng);
    for (DenseLayer& l : m.layers) {
      for (double& w : l.weights) w *= 20.0;  // push outputs well outside [0, 1]
    }
    const auto x = testing::uniform_vector(rng, v.input_dim(), 0, 1);
    const FieldValues out = denoise(m, x);
    for (double s : out) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 40.0);
    }
    EXPECT_EQ(denoise(m, x), out);
    const std::vector<double> wrong(v.with_pvalues ? 52 : 104, 0.5);
    EXPECT_THROW(denoise(m, wrong), std::invalid_argument);
  }
}

}  // namespace
}  // namespace vfd::nn
