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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vfd/field.hpp"
#include "vfd/rng.hpp"

namespace vfd {

enum class ScenarioKind {
  AgeDecline,
  SlowProgression,
  MediumProgression,
  FastProgression,
  Cataract,
};

inline constexpr std::array<ScenarioKind, 5> kAllScenarios{
    ScenarioKind::AgeDecline, ScenarioKind::SlowProgression,
    ScenarioKind::MediumProgression, ScenarioKind::FastProgression,
    ScenarioKind::Cataract};

/// Short setting name used in file names and tables ("age", "slow", ...).
std::string_view setting_name(ScenarioKind kind);
std::optional<ScenarioKind> parse_setting(std::string_view name);
bool is_progressing(ScenarioKind kind);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::AgeDecline;
  int n_eyes = 376;
  int n_exams = 20;
  double duration = 9.5;      // years
  double baseline_age = 60.0; // years
  double age_slope = -0.1;    // dB/year, applied to every location
  /// Progression settings only: cycle through all 24 baseline x pattern x
  /// rate combinations instead of pinning the rate to the setting.
  bool full_factorial = false;

  double exam_time(int k) const { return k * duration / (n_exams - 1); }
  /// Throws std::invalid_argument on n_eyes <= 0, n_exams < 6, duration <= 0.
  void validate() const;
};

enum class PatternKind { None, FocalSmall, FocalMedium, FocalLarge, Diffuse };
enum class BaselineKind { InferiorNasalDefect, SuperiorArcuate };

std::string_view to_string(PatternKind kind);
std::string_view to_string(BaselineKind kind);

/// Focal/diffuse progression rates, slow to fast.
inline constexpr std::array<double, 3> kProgressionRates{-0.5, -1.0, -2.0};
/// Diffuse decline applied in the cataract setting.
inline constexpr double kCataractRate = -1.0;

struct DecayPattern {
  PatternKind kind = PatternKind::None;
  std::vector<std::size_t> affected;  // 0-based location slots
  double rate = 0.0;                  // dB/year on affected locations
};

/// Location set for a pattern on a given baseline (focal sets differ by
/// baseline: nasal defects for the inferior-nasal field, paracentral/arcuate
/// for the superior-arcuate field).
DecayPattern make_pattern(BaselineKind baseline, PatternKind kind, double rate);

struct BaselineField {
  BaselineKind name = BaselineKind::InferiorNasalDefect;
  FieldValues sensitivities{};
};

BaselineField baseline_field(BaselineKind name);

/// Per-location test-retest variability. The default is the
/// sensitivity-dependent fit sd(s) = min(exp(-0.081 s + 3.27), 6) dB.
struct NoiseModel {
  enum class Kind { SensitivityDependent, Homoscedastic };
  Kind kind = Kind::SensitivityDependent;
  double log_slope = -0.081;
  double log_intercept = 3.27;
  double max_sd = 6.0;
  double constant_sd = 0.0;

  static NoiseModel homoscedastic(double sd) {
    NoiseModel m;
    m.kind = Kind::Homoscedastic;
    m.constant_sd = sd;
    return m;
  }

  double sd(double sensitivity) const;
};

/// Noise-free field at exam k.
VisualField true_trajectory(const BaselineField& baseline,
                            const DecayPattern& pattern, const ScenarioSpec& spec,
                            int exam_index, const NormativeModel& norm);

VisualField add_noise(const VisualField& field, const NoiseModel& model, Rng& rng,
                      const NormativeModel& norm);

/// Scenario assignment of eye `eye_index` within a cohort.
struct EyeScenario {
  BaselineKind baseline;
  DecayPattern pattern;
};
EyeScenario eye_scenario(const ScenarioSpec& spec, int eye_index);

/// Per-eye noise stream: depends only on (seed, setting, eye index).
Rng eye_stream(std::uint64_t seed, ScenarioKind kind, int eye_index);

std::vector<EyeSeries> simulate_cohort(const ScenarioSpec& spec,
                                       std::uint64_t seed,
                                       const NoiseModel& noise,
                                       const NormativeModel& norm);

/// Single eye; simulate_cohort() is this applied to every index.
EyeSeries simulate_eye(const ScenarioSpec& spec, int eye_index,
                       std::uint64_t seed, const NoiseModel& noise,
                       const NormativeModel& norm);

inline constexpr std::uint64_t kNormativeSeed = 242;
inline constexpr int kNormativeExams = 10'000;

/// Hill-of-vision means plus per-location TD cutoffs at the 5/2/1/0.5%
/// quantiles of a simulated healthy cohort (age decline only, noise on).
NormativeModel derive_normative_model(const NoiseModel& noise,
                                      std::uint64_t seed = kNormativeSeed,
                                      int n_exams = kNormativeExams);

/// derive_normative_model() with the default noise model and seed.
const NormativeModel& standard_normative();

}  // namespace vfd
