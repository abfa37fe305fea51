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

#include <cmath>

#include <gtest/gtest.h>

#include "support/ols_oracle.hpp"
#include "vfd/regression.hpp"
#include "vfd/rng.hpp"

namespace vfd {
namespace {

TEST(LinregTest, ExactLine) {
  const std::vector<double> t{0, 1, 2}, y{30, 29, 28};
  const RegressionFit f = linreg(t, y);
  EXPECT_NEAR(f.slope, -1.0, 1e-12);
  EXPECT_NEAR(f.intercept, 30.0, 1e-12);
  EXPECT_LT(f.p_value, 1e-9);
  EXPECT_EQ(f.n, 3u);
}

TEST(LinregTest, ExactLinesRecoverCoefficients) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const double slope = 6 * rng.uniform() - 3;
    const double intercept = 40 * rng.uniform();
    std::vector<double> t, y;
    const int n = 3 + static_cast<int>(rng.below(20));
    for (int k = 0; k < n; ++k) {
      t.push_back(0.5 * k + 0.1 * trial);
      y.push_back(intercept + slope * t.back());
    }
    const RegressionFit f = linreg(t, y);
    EXPECT_NEAR(f.slope, slope, 1e-9);
    EXPECT_NEAR(f.intercept, intercept, 1e-9);
  }
}

TEST(LinregTest, ConstantSeriesHasUnitPValue) {
  const std::vector<double> t{0, 0.5, 1, 1.5, 2, 2.5}, y(6, 27.3);
  const RegressionFit f = linreg(t, y);
  EXPECT_EQ(f.slope, 0.0);
  EXPECT_EQ(f.p_value, 1.0);
}

TEST(LinregTest, RejectsDegenerateInput) {
  const std::vector<double> two{0, 1};
  EXPECT_THROW(linreg(two, two), std::invalid_argument);
  const std::vector<double> same{1, 1, 1}, y{1, 2, 3};
  EXPECT_THROW(linreg(same, y), std::invalid_argument);
  const std::vector<double> t{0, 1, 2}, short_y{1, 2};
  EXPECT_THROW(linreg(t, short_y), std::invalid_argument);
}

TEST(TDistributionTest, QuadratureMatchesKnownValues) {
  // t = 2.101 is the two-sided 5% point at 18 degrees of freedom.
  EXPECT_NEAR(testing::t_two_sided_p_quadrature(2.100922, 18), 0.05, 1e-6);
  // dof = 1 is Cauchy: P(|T| > 1) = 1/2.
  EXPECT_NEAR(testing::t_two_sided_p_quadrature(1.0, 1), 0.5, 1e-9);
  EXPECT_NEAR(testing::t_two_sided_p_quadrature(0.0, 7), 1.0, 1e-9);
}

TEST(TDistributionTest, LibraryMatchesQuadrature) {
  for (double dof : {1.0, 2.0, 4.0, 10.0, 18.0, 50.0}) {
    for (double t = 0.0; t < 12.0; t += 0.37) {
      EXPECT_NEAR(t_two_sided_p(t, dof), testing::t_two_sided_p_quadrature(t, dof), 1e-6)
          << "t=" << t << " dof=" << dof;
      EXPECT_EQ(t_two_sided_p(-t, dof), t_two_sided_p(t, dof));
    }
  }
}

TEST(LinregTest, RandomDataMatchesNormalEquationOracle) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 2 ? 20 : 6 + static_cast<int>(rng.below(15));
    std::vector<double> t, y;
    const double slope = 2 * rng.uniform() - 1.5;
    for (int k = 0; k < n; ++k) {
      t.push_back(0.5 * k);
      y.push_back(28 + slope * t.back() + rng.normal(0, 2.0));
    }
    const RegressionFit f = linreg(t, y);
    const testing::OlsOracle o = testing::ols_oracle(t, y);
    EXPECT_NEAR(f.slope, o.slope, 1e-9);
    EXPECT_NEAR(f.intercept, o.intercept, 1e-9);
    EXPECT_NEAR(f.p_value, o.p_value, 1e-6);
    EXPECT_GE(f.p_value, 0.0);
    EXPECT_LE(f.p_value, 1.0);
  }
}

TEST(LinregTest, TranslationAndScalingOfTime) {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t, y, shifted, scaled;
    for (int k = 0; k < 12; ++k) {
      t.push_back(0.5 * k);
      y.push_back(25 - 0.7 * t.back() + rng.normal(0, 1.5));
      shifted.push_back(t.back() + 3.25);
      scaled.push_back(t.back() * 4.0);
    }
    const RegressionFit base = linreg(t, y);
    const RegressionFit sh = linreg(shifted, y);
    const RegressionFit sc = linreg(scaled, y);
    EXPECT_NEAR(sh.slope, base.slope, 1e-12);
    EXPECT_NEAR(sh.p_value, base.p_value, 1e-12);
    EXPECT_NEAR(sc.slope, base.slope / 4.0, 1e-12);
    EXPECT_NEAR(sc.p_value, base.p_value, 1e-12);
  }
}

TEST(PerFitTest, DecayRecoversRate) {
  std::vector<double> t, s;
  for (int k = 0; k < 20; ++k) {
    t.push_back(0.5 * k);
    s.push_back(std::exp(3.0 - 0.1 * t.back()));
  }
  const PERFit f = per_fit(t, s, 35.0);
  EXPECT_EQ(f.model, PERFit::Model::Decay);
  EXPECT_NEAR(f.b, -0.1, 1e-6);
  EXPECT_NEAR(f.a, 3.0, 1e-6);
  EXPECT_NEAR(f.prc, std::exp(-0.1) - 1.0, 1e-6);
  EXPECT_NEAR(f.prc, -0.0952, 1e-4);
  EXPECT_LT(f.p_value, 1e-9);
}

TEST(PerFitTest, DecayRecoveryAcrossRates) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = 1 + 2.5 * rng.uniform();
    const double b = -0.5 * rng.uniform();
    std::vector<double> t, s;
    for (int k = 0; k < 6 + trial % 15; ++k) {
      t.push_back(0.5 * k);
      s.push_back(std::exp(a + b * t.back()));
    }
    if (s.back() < kPerLogFloor) continue;
    EXPECT_NEAR(per_fit(t, s, 40.0).b, b, 1e-6);
  }
}

TEST(PerFitTest, ConstantSeries) {
  const std::vector<double> t{0, 0.5, 1, 1.5, 2, 2.5}, s(6, 24.0);
  const PERFit f = per_fit(t, s, 32.0);
  EXPECT_EQ(f.b, 0.0);
  EXPECT_EQ(f.prc, 0.0);
  EXPECT_EQ(f.p_value, 1.0);
}

TEST(PerFitTest, ImprovementRecoversRateAndSign) {
  const double s0 = 33.0;
  std::vector<double> t, s;
  for (int k = 0; k < 20; ++k) {
    t.push_back(0.5 * k);
    s.push_back(s0 - std::exp(1.0 - 0.2 * t.back()));
  }
  const PERFit f = per_fit(t, s, s0);
  EXPECT_EQ(f.model, PERFit::Model::Improvement);
  EXPECT_NEAR(f.b, -0.2, 1e-6);
  EXPECT_NEAR(f.prc, 1.0 - std::exp(-0.2), 1e-6);
  EXPECT_GT(f.prc, 0.0);
}

TEST(PerFitTest, ZeroSensitivitiesUseFloor) {
  const std::vector<double> t{0, 0.5, 1, 1.5, 2, 2.5}, s{3, 2, 1, 0, 0, 0};
  const PERFit f = per_fit(t, s, 30.0);
  EXPECT_TRUE(std::isfinite(f.b));
  EXPECT_LT(f.b, 0.0);
  EXPECT_LT(f.prc, 0.0);
}

}  // namespace
}  // namespace vfd
