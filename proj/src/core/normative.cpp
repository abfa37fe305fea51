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

#include "vfd/normative.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vfd {
namespace {

// Linear taper of eccentricity from 30 dB at the innermost ring to 26 dB at
// (-27, +-3), rounded to 0.1 dB.
constexpr std::array<double, kNumLocations> kMeanAt60{
    26.8, 27.0, 27.0, 26.8,                                //
    27.0, 27.7, 28.1, 28.1, 27.7, 27.0,                    //
    26.8, 27.7, 28.5, 29.1, 29.1, 28.5, 27.7, 26.8,        //
    26.0, 27.0, 28.1, 29.1, 30.0, 30.0, 29.1, 27.0,        //
    26.0, 27.0, 28.1, 29.1, 30.0, 30.0, 29.1, 27.0,        //
    26.8, 27.7, 28.5, 29.1, 29.1, 28.5, 27.7, 26.8,        //
    27.0, 27.7, 28.1, 28.1, 27.7, 27.0,                    //
    26.8, 27.0, 27.0, 26.8};

constexpr std::string_view kHeader = "# vfd-normative v1";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(PCategory c) {
  switch (c) {
    case PCategory::NS: return "NS";
    case PCategory::P5: return "P5";
    case PCategory::P2: return "P2";
    case PCategory::P1: return "P1";
    case PCategory::P05: return "P05";
  }
  return "?";
}

double category_code(PCategory c) { return 0.25 * static_cast<int>(c); }

PCategory categorize_pvalue(double td_value, const QuantileCutoffs& cutoffs) {
  if (td_value > cutoffs.p5) return PCategory::NS;
  if (td_value <= cutoffs.p05) return PCategory::P05;
  if (td_value <= cutoffs.p1) return PCategory::P1;
  if (td_value <= cutoffs.p2) return PCategory::P2;
  return PCategory::P5;
}

void NormativeModel::validate() const {
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    if (!cutoffs[i].strictly_decreasing()) {
      throw DataError("normative cutoffs not strictly decreasing at location " +
                      std::to_string(i + 1));
    }
  }
}

NormativeModel hill_of_vision() {
  NormativeModel m;
  m.mean_at_60 = kMeanAt60;
  return m;
}

void write_normative(std::ostream& os, const NormativeModel& model) {
  const Grid24_2& g = grid();
  os << kHeader << '\n';
  os << "age_slope\t" << fmt_double(model.age_slope) << '\n';
  os << "grid_index\tx\ty\tmean_at_60\tcut_5\tcut_2\tcut_1\tcut_0.5\n";
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    const GridPoint p = g.location_point(i);
    const QuantileCutoffs& c = model.cutoffs[i];
    os << g.grid_index_of(i) << '\t' << p.x_deg << '\t' << p.y_deg << '\t'
       << fmt_double(model.mean_at_60[i]) << '\t' << fmt_double(c.p5) << '\t'
       << fmt_double(c.p2) << '\t' << fmt_double(c.p1) << '\t'
       << fmt_double(c.p05) << '\n';
  }
}

NormativeModel read_normative(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw DataError("normative table: missing or unsupported header");
  }
  NormativeModel m;
  {
    std::getline(is, line);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key >> m.age_slope) || key != "age_slope") {
      throw DataError("normative table: expected age_slope row");
    }
  }
  std::getline(is, line);  // column names
  const Grid24_2& g = grid();
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    if (!std::getline(is, line)) throw DataError("normative table: truncated");
    std::istringstream ls(line);
    int index = 0, x = 0, y = 0;
    QuantileCutoffs c;
    if (!(ls >> index >> x >> y >> m.mean_at_60[i] >> c.p5 >> c.p2 >> c.p1 >>
          c.p05)) {
      throw DataError("normative table: malformed row " + std::to_string(i + 1));
    }
    if (index != g.grid_index_of(i)) {
      throw DataError("normative table: unexpected grid index " +
                      std::to_string(index));
    }
    m.cutoffs[i] = c;
  }
  m.validate();
  return m;
}

void save_normative(const std::string& path, const NormativeModel& model) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path);
  write_normative(os, model);
}

NormativeModel load_normative(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read " + path);
  return read_normative(is);
}

}  // namespace vfd
