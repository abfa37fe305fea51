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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vfd/field.hpp"
#include "vfd/neural/autoencoder.hpp"

namespace vfd {

enum class Method { PLR, MD, GRI };
inline constexpr std::array<Method, 3> kAllMethods{Method::PLR, Method::MD, Method::GRI};
std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Data pipeline feeding the detectors: raw exams or one of the denoisers.
enum class Pipeline { Raw, MAEp, MAE, VAEp, VAE };
inline constexpr std::array<Pipeline, 5> kAllPipelines{
    Pipeline::Raw, Pipeline::MAEp, Pipeline::MAE, Pipeline::VAEp, Pipeline::VAE};
/// "Raw", "MAE+p", "MAE", "VAE+p", "VAE".
std::string_view to_string(Pipeline p);
std::optional<Pipeline> parse_pipeline(std::string_view name);
/// Network variant a pipeline denoises with; nullopt for Raw.
std::optional<nn::Variant> pipeline_variant(Pipeline p);

struct DetectionConfig {
  // PLR: >= min_locations with slope <= slope and p <= p.
  double plr_slope = -1.0;
  double plr_p = 0.01;
  int plr_min_locations = 3;
  // MD trend: slope <= slope and p <= p.
  double md_slope = -0.5;
  double md_p = 0.05;
  // GRI.
  double gri_p = 0.05;
  double gri_normalization = 5.2;
  double gri_cutoff = -1.0;
  double gri_outlier_z = 3.0;
  double gri_s0_sd = 2.0;
};

/// PLR at analysis point k (the first k exams).
bool plr_criterion(const EyeSeries& series, std::size_t k,
                   const DetectionConfig& cfg = {});

/// Unweighted mean of the 52 TD values.
double md(const VisualField& field);
bool md_criterion(const EyeSeries& series, std::size_t k,
                  const DetectionConfig& cfg = {});

struct GRIScore {
  double value = 0.0;  // in [-10, 10]
  int contributing = 0;
};

/// Age-adjusted pointwise exponential regression summed over significant
/// locations and scaled by 10 / gri_normalization.
GRIScore gri(const EyeSeries& series, std::size_t k, const NormativeModel& norm,
             const DetectionConfig& cfg = {});

bool criterion(Method method, const EyeSeries& series, std::size_t k,
               const NormativeModel& norm, const DetectionConfig& cfg = {});

struct ProgressionVerdict {
  std::string eye_id;
  Method method = Method::PLR;
  bool progressed = false;
  std::optional<double> conversion_time;
  /// Criterion at analysis points k = 6..n.
  std::vector<bool> trace;
  std::vector<double> trace_times;
};

/// Progressed iff the trace is true at two consecutive analysis points and
/// at the last one; conversion is the time of the first point of the
/// earliest consecutive positive pair.
void apply_harness_rule(ProgressionVerdict& verdict);

/// Runs the criterion on growing prefixes starting at 6 exams. When a
/// denoiser is given every exam is denoised first.
ProgressionVerdict progressive_harness(const EyeSeries& series, Method method,
                                       const NormativeModel& norm,
                                       const DetectionConfig& cfg = {},
                                       const nn::Autoencoder* denoiser = nullptr);

/// Copy of the series with every exam passed through the denoiser.
EyeSeries denoise_series(const nn::Autoencoder& model, const EyeSeries& series,
                         const NormativeModel& norm);

struct CohortSummary {
  std::size_t total = 0;
  std::size_t progressed = 0;
  double percentage = 0.0;
  std::optional<double> mean_conversion_time;  // over progressors
};

/// Throws std::invalid_argument on an empty list.
CohortSummary cohort_summary(const std::vector<ProgressionVerdict>& verdicts);

}  // namespace vfd
