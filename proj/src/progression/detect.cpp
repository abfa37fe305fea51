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

#include "vfd/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vfd/regression.hpp"

namespace vfd {
namespace {

// z of the one-sided 5% normal quantile; converts the 5% TD cutoff to an SD.
constexpr double kZ5 = 1.6448536269514722;

void check_prefix(const EyeSeries& series, std::size_t k) {
  if (k < kMinExams || k > series.exams.size()) {
    throw std::invalid_argument("analysis point must be in [6, n_exams]");
  }
}

std::vector<double> prefix_times(const EyeSeries& series, std::size_t k) {
  std::vector<double> t(k);
  for (std::size_t j = 0; j < k; ++j) t[j] = series.exams[j].exam_time;
  return t;
}

// Drops points whose internally studentized residual from the linear fit
// exceeds `z` in magnitude, provided at least 3 points remain.
void drop_outliers(std::vector<double>& t, std::vector<double>& y, double z) {
  const RegressionFit f = linreg(t, y);
  if (f.residual_se == 0.0) return;
  const auto n = static_cast<double>(t.size());
  double t_mean = 0.0;
  for (double v : t) t_mean += v;
  t_mean /= n;
  double sxx = 0.0;
  for (double v : t) sxx += (v - t_mean) * (v - t_mean);

  std::vector<double> kt, ky;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double h = 1.0 / n + (t[j] - t_mean) * (t[j] - t_mean) / sxx;
    const double r = (y[j] - f.intercept - f.slope * t[j]) /
                     (f.residual_se * std::sqrt(std::max(1.0 - h, 1e-12)));
    if (std::abs(r) <= z) {
      kt.push_back(t[j]);
      ky.push_back(y[j]);
    }
  }
  if (kt.size() >= 3 && kt.size() < t.size()) {
    t.swap(kt);
    y.swap(ky);
  }
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::PLR: return "PLR";
    case Method::MD: return "MD";
    case Method::GRI: return "GRI";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view to_string(Pipeline p) {
  switch (p) {
    case Pipeline::Raw: return "Raw";
    case Pipeline::MAEp: return "MAE+p";
    case Pipeline::MAE: return "MAE";
    case Pipeline::VAEp: return "VAE+p";
    case Pipeline::VAE: return "VAE";
  }
  return "?";
}

std::optional<Pipeline> parse_pipeline(std::string_view name) {
  for (Pipeline p : kAllPipelines) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::optional<nn::Variant> pipeline_variant(Pipeline p) {
  switch (p) {
    case Pipeline::Raw: return std::nullopt;
    case Pipeline::MAEp: return nn::Variant{nn::ModelKind::MAE, true};
    case Pipeline::MAE: return nn::Variant{nn::ModelKind::MAE, false};
    case Pipeline::VAEp: return nn::Variant{nn::ModelKind::VAE, true};
    case Pipeline::VAE: return nn::Variant{nn::ModelKind::VAE, false};
  }
  return std::nullopt;
}

bool plr_criterion(const EyeSeries& series, std::size_t k, const DetectionConfig& cfg) {
  check_prefix(series, k);
  const auto t = prefix_times(series, k);
  std::vector<double> y(k);
  int qualifying = 0;
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    for (std::size_t j = 0; j < k; ++j) y[j] = series.exams[j].sensitivities[i];
    if (linreg_slope(t, y) > cfg.plr_slope) continue;
    const RegressionFit f = linreg(t, y);
    if (f.slope <= cfg.plr_slope && f.p_value <= cfg.plr_p) ++qualifying;
  }
  return qualifying >= cfg.plr_min_locations;
}

double md(const VisualField& field) {
  double sum = 0.0;
  for (double td : field.td) sum += td;
  return sum / static_cast<double>(kNumLocations);
}

bool md_criterion(const EyeSeries& series, std::size_t k, const DetectionConfig& cfg) {
  check_prefix(series, k);
  const auto t = prefix_times(series, k);
  std::vector<double> y(k);
  for (std::size_t j = 0; j < k; ++j) y[j] = md(series.exams[j]);
  const RegressionFit f = linreg(t, y);
  return f.slope <= cfg.md_slope && f.p_value <= cfg.md_p;
}

GRIScore gri(const EyeSeries& series, std::size_t k, const NormativeModel& norm,
             const DetectionConfig& cfg) {
  check_prefix(series, k);
  const VisualField& first = series.exams.front();
  const double baseline_age = first.age_at_exam - first.exam_time;
  const auto times = prefix_times(series, k);

  GRIScore score;
  double prc_sum = 0.0;
  std::vector<double> t, y;
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    t = times;
    y.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      y[j] = series.exams[j].sensitivities[i] - norm.age_slope * t[j];
    }
    drop_outliers(t, y, cfg.gri_outlier_z);
    const double normal_sd = -norm.cutoffs[i].p5 / kZ5;
    const double s0 = norm.normative(i, baseline_age) + cfg.gri_s0_sd * normal_sd;
    const PERFit f = per_fit(t, y, s0);
    if (f.p_value <= cfg.gri_p) {
      prc_sum += f.prc;
      ++score.contributing;
    }
  }
  score.value = std::clamp(10.0 * prc_sum / cfg.gri_normalization, -10.0, 10.0);
  return score;
}

bool criterion(Method method, const EyeSeries& series, std::size_t k,
               const NormativeModel& norm, const DetectionConfig& cfg) {
  switch (method) {
    case Method::PLR: return plr_criterion(series, k, cfg);
    case Method::MD: return md_criterion(series, k, cfg);
    case Method::GRI: return gri(series, k, norm, cfg).value <= cfg.gri_cutoff;
  }
  return false;
}

void apply_harness_rule(ProgressionVerdict& v) {
  v.progressed = false;
  v.conversion_time.reset();
  if (v.trace.empty() || !v.trace.back()) return;
  for (std::size_t j = 0; j + 1 < v.trace.size(); ++j) {
    if (v.trace[j] && v.trace[j + 1]) {
      v.progressed = true;
      if (j < v.trace_times.size()) v.conversion_time = v.trace_times[j];
      return;
    }
  }
}

ProgressionVerdict progressive_harness(const EyeSeries& series, Method method,
                                       const NormativeModel& norm,
                                       const DetectionConfig& cfg,
                                       const nn::Autoencoder* denoiser) {
  series.validate();
  if (denoiser != nullptr) {
    return progressive_harness(denoise_series(*denoiser, series, norm), method, norm,
                               cfg, nullptr);
  }
  ProgressionVerdict v;
  v.eye_id = series.eye_id;
  v.method = method;
  for (std::size_t k = kMinExams; k <= series.exams.size(); ++k) {
    v.trace.push_back(criterion(method, series, k, norm, cfg));
    v.trace_times.push_back(series.exams[k - 1].exam_time);
  }
  apply_harness_rule(v);
  return v;
}

EyeSeries denoise_series(const nn::Autoencoder& model, const EyeSeries& series,
                         const NormativeModel& norm) {
  EyeSeries out;
  out.eye_id = series.eye_id;
  out.truth = series.truth;
  out.exams.reserve(series.exams.size());
  for (const VisualField& f : series.exams) {
    out.exams.push_back(nn::denoise_field(model, f, norm));
  }
  return out;
}

CohortSummary cohort_summary(const std::vector<ProgressionVerdict>& verdicts) {
  if (verdicts.empty()) throw std::invalid_argument("cohort_summary: no verdicts");
  CohortSummary s;
  s.total = verdicts.size();
  double time_sum = 0.0;
  std::size_t timed = 0;
  for (const auto& v : verdicts) {
    if (!v.progressed) continue;
    ++s.progressed;
    if (v.conversion_time) {
      time_sum += *v.conversion_time;
      ++timed;
    }
  }
  s.percentage = 100.0 * static_cast<double>(s.progressed) / static_cast<double>(s.total);
  if (timed > 0) s.mean_conversion_time = time_sum / static_cast<double>(timed);
  return s;
}

}  // namespace vfd
