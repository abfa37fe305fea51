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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfd/normative.hpp"

namespace vfd {

inline constexpr double kMinSensitivity = 0.0;
inline constexpr double kMaxSensitivity = 40.0;
/// Input scale: features are sensitivity / 40.
inline constexpr double kSensitivityScale = 40.0;
/// Minimum exams per eye; the progression harness starts at this prefix.
inline constexpr std::size_t kMinExams = 6;

using FieldValues = std::array<double, kNumLocations>;

struct VisualField {
  FieldValues sensitivities{};
  double exam_time = 0.0;    // years since baseline
  double age_at_exam = 0.0;  // years
  FieldValues td{};
  std::array<PCategory, kNumLocations> p_categories{};
};

/// td[i] = sensitivity[i] - normative(i, age). Not clamped.
FieldValues total_deviation(const VisualField& field, const NormativeModel& norm);

/// Builds a field from raw sensitivities: clamps to [0, 40] and derives TD and
/// p-value categories.
VisualField make_field(const FieldValues& sensitivities, double exam_time,
                       double age_at_exam, const NormativeModel& norm);

/// Recomputes td and p_categories in place from the current sensitivities.
void refresh_derived(VisualField& field, const NormativeModel& norm);

/// Scaled sensitivities (52), optionally followed by 52 category codes.
std::vector<double> encode_input(const VisualField& field, bool with_pvalues);
/// Inverse of the sensitivity block of encode_input().
FieldValues decode_sensitivities(std::span<const double> features);

enum class Truth { Progressing, Nonprogressing };

struct GroundTruth {
  Truth label = Truth::Nonprogressing;
  std::string setting;  // e.g. "slow"
  std::string pattern;  // e.g. "SuperiorArcuate/FocalLarge/-2.0"
};

struct EyeSeries {
  std::string eye_id;
  std::vector<VisualField> exams;
  std::optional<GroundTruth> truth;

  /// Throws std::invalid_argument unless there are at least kMinExams exams
  /// with strictly increasing exam_time.
  void validate() const;
};

}  // namespace vfd
