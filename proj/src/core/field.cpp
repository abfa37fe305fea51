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

#include "vfd/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace vfd {

FieldValues total_deviation(const VisualField& field, const NormativeModel& norm) {
  FieldValues td{};
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    td[i] = field.sensitivities[i] - norm.normative(i, field.age_at_exam);
  }
  return td;
}

void refresh_derived(VisualField& field, const NormativeModel& norm) {
  field.td = total_deviation(field, norm);
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    field.p_categories[i] = categorize_pvalue(field.td[i], norm.cutoffs[i]);
  }
}

VisualField make_field(const FieldValues& sensitivities, double exam_time,
                       double age_at_exam, const NormativeModel& norm) {
  VisualField f;
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    f.sensitivities[i] =
        std::clamp(sensitivities[i], kMinSensitivity, kMaxSensitivity);
  }
  f.exam_time = exam_time;
  f.age_at_exam = age_at_exam;
  refresh_derived(f, norm);
  return f;
}

std::vector<double> encode_input(const VisualField& field, bool with_pvalues) {
  std::vector<double> x;
  x.reserve(with_pvalues ? 2 * kNumLocations : kNumLocations);
  for (double s : field.sensitivities) x.push_back(s / kSensitivityScale);
  if (with_pvalues) {
    for (PCategory c : field.p_categories) x.push_back(category_code(c));
  }
  return x;
}

FieldValues decode_sensitivities(std::span<const double> features) {
  if (features.size() < kNumLocations) {
    throw std::invalid_argument("feature vector shorter than 52");
  }
  FieldValues s{};
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    s[i] = features[i] * kSensitivityScale;
  }
  return s;
}

void EyeSeries::validate() const {
  if (exams.size() < kMinExams) {
    throw std::invalid_argument("eye " + eye_id + " has fewer than 6 exams");
  }
  for (std::size_t k = 1; k < exams.size(); ++k) {
    if (!(exams[k].exam_time > exams[k - 1].exam_time)) {
      throw std::invalid_argument("eye " + eye_id +
                                  ": exam times not strictly increasing");
    }
  }
}

}  // namespace vfd
