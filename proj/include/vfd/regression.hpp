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

#pragma once

#include <cstddef>
#include <span>

namespace vfd {

/// Ordinary least-squares fit of values against times.
struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Two-sided t-test of slope != 0 with n - 2 degrees of freedom. By
  /// convention 1 for a perfect fit with zero slope and 0 for a perfect fit
  /// with non-zero slope.
  double p_value = 1.0;
  std::size_t n = 0;
  double residual_se = 0.0;
};

/// Throws std::invalid_argument for fewer than 3 points, mismatched lengths,
/// or times that are all equal.
RegressionFit linreg(std::span<const double> times, std::span<const double> values);

/// OLS slope only (same preconditions as linreg()).
double linreg_slope(std::span<const double> times, std::span<const double> values);

/// Two-sided p-value of a t statistic.
double t_two_sided_p(double t, double dof);

/// Pointwise exponential regression.
///   Decay:       S        = exp(a + b * FU)
///   Improvement: S0 - S   = exp(a + b * FU)
/// The decay model is used when the linear trend of S is <= 0. Log arguments
/// are floored at 0.1 dB. prc is the yearly proportional change
/// exp(b) - 1, negated for the improvement model so that positive always
/// means improvement.
struct PERFit {
  enum class Model { Decay, Improvement };
  Model model = Model::Decay;
  double a = 0.0;
  double b = 0.0;
  double p_value = 1.0;
  double prc = 0.0;
};

inline constexpr double kPerLogFloor = 0.1;

PERFit per_fit(std::span<const double> times, std::span<const double> values,
               double s0);

}  // namespace vfd
