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

#include <iosfwd>
#include <string>
#include <vector>

#include "vfd/field.hpp"

namespace vfd {

/// Cohort table: header row, then one row per exam with eye_id, setting,
/// truth, pattern, exam_index, t_years, age, s1..s52, td1..td52, cat1..cat52.
/// Numbers are written with 17 significant digits so reading back is exact.
void write_cohort(std::ostream& os, const std::vector<EyeSeries>& cohort);
std::vector<EyeSeries> read_cohort(std::istream& is);

void save_cohort(const std::string& path, const std::vector<EyeSeries>& cohort);
std::vector<EyeSeries> load_cohort(const std::string& path);

/// Shortest-roundtrip-safe decimal formatting used by every table writer.
std::string format_number(double v);

}  // namespace vfd
