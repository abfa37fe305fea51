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

#include "vfd/cohort_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vfd {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw DataError("bad number: " + s);
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("bad integer: " + s);
  }
  return v;
}

constexpr std::size_t kFixedColumns = 7;

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cohort_header() {
  std::string h = "eye_id,setting,truth,pattern,exam_index,t_years,age";
  for (const char* prefix : {",s", ",td", ",cat"}) {
    for (std::size_t i = 1; i <= kNumLocations; ++i) h += prefix + std::to_string(i);
  }
  return h;
}

}  // namespace

void write_cohort(std::ostream& os, const std::vector<EyeSeries>& cohort) {
  os << cohort_header() << '\n';
  for (const EyeSeries& eye : cohort) {
    const std::string setting = eye.truth ? eye.truth->setting : "";
    const std::string truth =
        !eye.truth ? ""
        : eye.truth->label == Truth::Progressing ? "progressing"
                                                 : "nonprogressing";
    const std::string pattern = eye.truth ? eye.truth->pattern : "";
    for (std::size_t k = 0; k < eye.exams.size(); ++k) {
      const VisualField& f = eye.exams[k];
      os << eye.eye_id << ',' << setting << ',' << truth << ',' << pattern << ','
         << k << ',' << format_number(f.exam_time) << ','
         << format_number(f.age_at_exam);
      for (double s : f.sensitivities) os << ',' << format_number(s);
      for (double td : f.td) os << ',' << format_number(td);
      for (PCategory c : f.p_categories) os << ',' << static_cast<int>(c);
      os << '\n';
    }
  }
}

std::vector<EyeSeries> read_cohort(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != cohort_header()) {
    throw DataError("cohort file: missing header");
  }
  std::vector<EyeSeries> cohort;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != kFixedColumns + 3 * kNumLocations) {
      throw DataError("cohort file: wrong column count on row " + std::to_string(row));
    }
    if (cohort.empty() || cohort.back().eye_id != cells[0]) {
      EyeSeries eye;
      eye.eye_id = cells[0];
      if (!cells[1].empty() || !cells[2].empty()) {
        GroundTruth t;
        t.setting = cells[1];
        if (cells[2] == "progressing") {
          t.label = Truth::Progressing;
        } else if (cells[2] == "nonprogressing") {
          t.label = Truth::Nonprogressing;
        } else {
          throw DataError("cohort file: bad truth label " + cells[2]);
        }
        t.pattern = cells[3];
        eye.truth = t;
      }
      cohort.push_back(std::move(eye));
    }
    VisualField f;
    f.exam_time = parse_double(cells[5]);
    f.age_at_exam = parse_double(cells[6]);
    for (std::size_t i = 0; i < kNumLocations; ++i) {
      f.sensitivities[i] = parse_double(cells[kFixedColumns + i]);
      f.td[i] = parse_double(cells[kFixedColumns + kNumLocations + i]);
      const int c = parse_int(cells[kFixedColumns + 2 * kNumLocations + i]);
      if (c < 0 || c > 4) throw DataError("cohort file: bad category code");
      f.p_categories[i] = static_cast<PCategory>(c);
    }
    cohort.back().exams.push_back(f);
  }
  return cohort;
}

void save_cohort(const std::string& path, const std::vector<EyeSeries>& cohort) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path);
  write_cohort(os, cohort);
  if (!os) throw DataError("write failed: " + path);
}

std::vector<EyeSeries> load_cohort(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read " + path);
  return read_cohort(is);
}

}  // namespace vfd
