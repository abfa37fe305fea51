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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vfd/grid.hpp"

namespace vfd {

/// Raised for malformed or missing input data (files, tables, checkpoints).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordinal total-deviation probability category, ordered from normal to the
/// most extreme.
enum class PCategory : int { NS = 0, P5 = 1, P2 = 2, P1 = 3, P05 = 4 };

std::string_view to_string(PCategory c);
/// Feature code used as network input: NS→0, P5→0.25, ..., P05→1.
double category_code(PCategory c);

/// TD thresholds for the 5%, 2%, 1% and 0.5% categories at one location.
struct QuantileCutoffs {
  double p5 = 0.0;
  double p2 = 0.0;
  double p1 = 0.0;
  double p05 = 0.0;

  bool strictly_decreasing() const { return p5 > p2 && p2 > p1 && p1 > p05; }
};

/// Maps a TD value to its category. A TD equal to a cutoff falls into that
/// cutoff's category.
PCategory categorize_pvalue(double td_value, const QuantileCutoffs& cutoffs);

struct NormativeModel {
  static constexpr double kReferenceAge = 60.0;

  std::array<double, kNumLocations> mean_at_60{};
  double age_slope = -0.1;
  std::array<QuantileCutoffs, kNumLocations> cutoffs{};

  double normative(std::size_t location, double age) const {
    return mean_at_60[location] + age_slope * (age - kReferenceAge);
  }

  /// Throws DataError when any location's cutoffs are not strictly decreasing.
  void validate() const;
};

/// The hill-of-vision mean table at age 60 (30 dB centrally, 26 dB at the
/// nasal periphery). Cutoffs are left zero; see derive_normative_model().
NormativeModel hill_of_vision();

/// Versioned plain-text table: one row per location with grid index,
/// coordinates, mean at 60 and four cutoffs.
void write_normative(std::ostream& os, const NormativeModel& model);
NormativeModel read_normative(std::istream& is);
void save_normative(const std::string& path, const NormativeModel& model);
NormativeModel load_normative(const std::string& path);

}  // namespace vfd
