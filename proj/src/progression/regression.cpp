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

#include "vfd/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace vfd {
namespace {

struct Moments {
  double t_mean = 0.0;
  double y_mean = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
};

Moments moments(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw std::invalid_argument("linreg: length mismatch");
  if (t.size() < 3) throw std::invalid_argument("linreg: need at least 3 points");
  const auto n = static_cast<double>(t.size());
  Moments m;
  for (std::size_t i = 0; i < t.size(); ++i) {
    m.t_mean += t[i];
    m.y_mean += y[i];
  }
  m.t_mean /= n;
  m.y_mean /= n;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dt = t[i] - m.t_mean;
    m.sxx += dt * dt;
    // Sum of dt is zero, so y[0] can stand in for the mean; this keeps sxy
    // exactly zero for a constant series.
    m.sxy += dt * (y[i] - y[0]);
  }
  if (!(m.sxx > 0.0)) throw std::invalid_argument("linreg: degenerate times");
  return m;
}

}  // namespace

double t_two_sided_p(double t, double dof) {
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(dist, -std::abs(t)));
}

double linreg_slope(std::span<const double> times, std::span<const double> values) {
  const Moments m = moments(times, values);
  return m.sxy / m.sxx;
}

RegressionFit linreg(std::span<const double> times, std::span<const double> values) {
  const Moments m = moments(times, values);
  RegressionFit fit;
  fit.n = times.size();
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.y_mean - fit.slope * m.t_mean;
  double sse = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double r = values[i] - (fit.intercept + fit.slope * times[i]);
    sse += r * r;
  }
  const double dof = static_cast<double>(fit.n) - 2.0;
  fit.residual_se = std::sqrt(sse / dof);
  const double se_slope = fit.residual_se / std::sqrt(m.sxx);
  if (se_slope == 0.0) {
    fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
  } else {
    fit.p_value = t_two_sided_p(fit.slope / se_slope, dof);
  }
  return fit;
}

PERFit per_fit(std::span<const double> times, std::span<const double> values,
               double s0) {
  PERFit out;
  const double trend = linreg_slope(times, values);
  out.model = trend <= 0.0 ? PERFit::Model::Decay : PERFit::Model::Improvement;
  std::vector<double> y(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double arg = out.model == PERFit::Model::Decay ? values[i] : s0 - values[i];
    y[i] = std::log(std::max(arg, kPerLogFloor));
  }
  const RegressionFit f = linreg(times, y);
  out.a = f.intercept;
  out.b = f.slope;
  out.p_value = f.p_value;
  const double change = std::expm1(f.slope);
  out.prc = out.model == PERFit::Model::Decay ? change : -change;
  return out;
}

}  // namespace vfd
