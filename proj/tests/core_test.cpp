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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "vfd/field.hpp"
#include "vfd/grid.hpp"
#include "vfd/normative.hpp"
#include "vfd/rng.hpp"
#include "vfd/simulator.hpp"

namespace vfd {
namespace {

TEST(GridTest, CanonicalLayout) {
  const Grid24_2 g = build_grid();
  EXPECT_EQ(g.points.size(), 54u);
  EXPECT_EQ(g.blind_spot_indices[0], 26);
  EXPECT_EQ(g.blind_spot_indices[1], 35);
  int kept = 0;
  for (int i = 1; i <= 54; ++i) kept += g.is_blind_spot(i) ? 0 : 1;
  EXPECT_EQ(kept, 52);
  EXPECT_EQ(g.at(26).x_deg, 15);
  EXPECT_EQ(g.at(26).y_deg, 3);
  EXPECT_EQ(g.at(35).x_deg, 15);
  EXPECT_EQ(g.at(35).y_deg, -3);
}

// Independent enumeration: 6-degree lattice offset by 3, within 24 degrees
// of fixation, plus the two nasal-step points at x = -27.
TEST(GridTest, RowSizesMatchLatticeEnumeration) {
  std::vector<std::pair<int, int>> expected;
  for (int y = 21; y >= -21; y -= 6) {
    for (int x = -27; x <= 27; x += 6) {
      const bool inside = x * x + y * y <= 24 * 24;
      const bool nasal_step = x == -27 && std::abs(y) == 3;
      if (inside || nasal_step) expected.emplace_back(x, y);
    }
  }
  ASSERT_EQ(expected.size(), 54u);
  const Grid24_2 g = build_grid();
  std::vector<int> row_sizes;
  int prev_y = 1000;
  for (std::size_t i = 0; i < 54; ++i) {
    EXPECT_EQ(g.points[i].x_deg, expected[i].first) << i;
    EXPECT_EQ(g.points[i].y_deg, expected[i].second) << i;
    if (expected[i].second != prev_y) {
      row_sizes.push_back(0);
      prev_y = expected[i].second;
    }
    ++row_sizes.back();
  }
  EXPECT_EQ(row_sizes, (std::vector<int>{4, 6, 8, 9, 9, 8, 6, 4}));
}

TEST(GridTest, LocationMappingIsTotalAndStable) {
  const Grid24_2& g = grid();
  std::set<int> seen;
  for (std::size_t loc = 0; loc < kNumLocations; ++loc) {
    const int idx = g.grid_index_of(loc);
    EXPECT_FALSE(g.is_blind_spot(idx));
    EXPECT_EQ(g.location_of(idx), loc);
    seen.insert(idx);
  }
  EXPECT_EQ(seen.size(), kNumLocations);
  EXPECT_FALSE(g.location_of(26).has_value());
  EXPECT_FALSE(g.location_of(35).has_value());
  EXPECT_EQ(g.grid_index_of(25), 27);
  EXPECT_EQ(g.grid_index_of(33), 36);
}

TEST(NormativeTest, HillOfVisionShape) {
  const NormativeModel m = hill_of_vision();
  const auto [lo, hi] = std::minmax_element(m.mean_at_60.begin(), m.mean_at_60.end());
  EXPECT_DOUBLE_EQ(*hi, 30.0);
  EXPECT_DOUBLE_EQ(*lo, 26.0);
  // Central four points are the highest.
  for (auto [x, y] : {std::pair{-3, 3}, {3, 3}, {-3, -3}, {3, -3}}) {
    EXPECT_DOUBLE_EQ(m.mean_at_60[*grid().find_location(x, y)], 30.0);
  }
}

TEST(NormativeTest, AgeAdjustment) {
  const NormativeModel m = hill_of_vision();
  EXPECT_DOUBLE_EQ(m.normative(0, 60.0), m.mean_at_60[0]);
  EXPECT_NEAR(m.normative(0, 70.0), m.mean_at_60[0] - 1.0, 1e-12);
}

TEST(CategorizeTest, Examples) {
  const QuantileCutoffs c{-4.0, -5.5, -6.5, -7.5};
  EXPECT_EQ(categorize_pvalue(0.0, c), PCategory::NS);
  EXPECT_EQ(categorize_pvalue(-30.0, c), PCategory::P05);
  EXPECT_EQ(categorize_pvalue(-5.5, c), PCategory::P2);
  EXPECT_EQ(categorize_pvalue(-4.0, c), PCategory::P5);
  EXPECT_EQ(categorize_pvalue(-7.5, c), PCategory::P05);
}

// Brute-force oracle: category = number of cutoffs the value is at or below.
TEST(CategorizeTest, MatchesThresholdCountOracleOnGrid) {
  const NormativeModel& norm = standard_normative();
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    const QuantileCutoffs& c = norm.cutoffs[i];
    const std::array<double, 4> cuts{c.p5, c.p2, c.p1, c.p05};
    int prev = 0;
    for (int step = 0; step <= 450; ++step) {
      const double td = 10.0 - 0.1 * step;
      int count = 0;
      for (double cut : cuts) count += td <= cut ? 1 : 0;
      const int got = static_cast<int>(categorize_pvalue(td, c));
      ASSERT_EQ(got, count) << "location " << i << " td " << td;
      ASSERT_GE(got, prev);  // monotone: lower td never less extreme
      prev = got;
    }
    EXPECT_EQ(categorize_pvalue(c.p2, c), PCategory::P2);
  }
}

TEST(TotalDeviationTest, Examples) {
  const NormativeModel norm = standard_normative();
  VisualField f;
  f.age_at_exam = 60.0;
  f.sensitivities = norm.mean_at_60;
  for (double td : total_deviation(f, norm)) EXPECT_DOUBLE_EQ(td, 0.0);

  f.sensitivities[7] -= 5.0;
  EXPECT_NEAR(total_deviation(f, norm)[7], -5.0, 1e-12);

  f.sensitivities = norm.mean_at_60;
  f.age_at_exam = 70.0;
  for (double td : total_deviation(f, norm)) EXPECT_NEAR(td, 1.0, 1e-12);
}

TEST(TotalDeviationTest, TranslationEquivariant) {
  const NormativeModel& norm = standard_normative();
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    VisualField f;
    f.age_at_exam = 50.0 + 30.0 * rng.uniform();
    for (double& s : f.sensitivities) s = 40.0 * rng.uniform();
    const double c = 10.0 * rng.uniform() - 5.0;
    VisualField g = f;
    for (double& s : g.sensitivities) s += c;
    const auto a = total_deviation(f, norm);
    const auto b = total_deviation(g, norm);
    for (std::size_t i = 0; i < kNumLocations; ++i) EXPECT_NEAR(b[i] - a[i], c, 1e-9);
  }
}

TEST(FieldTest, MakeFieldClampsAndDerives) {
  const NormativeModel& norm = standard_normative();
  FieldValues s{};
  s.fill(45.0);
  s[0] = -3.0;
  const VisualField f = make_field(s, 1.0, 61.0, norm);
  EXPECT_EQ(f.sensitivities[0], 0.0);
  EXPECT_EQ(f.sensitivities[1], 40.0);
  EXPECT_EQ(f.p_categories[0], PCategory::P05);
  EXPECT_EQ(f.p_categories[1], PCategory::NS);
  EXPECT_NEAR(f.td[1], 40.0 - norm.normative(1, 61.0), 1e-12);
}

TEST(EncodeTest, Examples) {
  VisualField f;
  auto x = encode_input(f, false);
  ASSERT_EQ(x.size(), 52u);
  for (double v : x) EXPECT_EQ(v, 0.0);

  f.sensitivities[3] = 40.0;
  EXPECT_EQ(encode_input(f, false)[3], 1.0);

  x = encode_input(f, true);
  ASSERT_EQ(x.size(), 104u);
  for (std::size_t i = 52; i < 104; ++i) EXPECT_EQ(x[i], 0.0);

  f.p_categories[0] = PCategory::P5;
  f.p_categories[1] = PCategory::P2;
  f.p_categories[2] = PCategory::P1;
  f.p_categories[3] = PCategory::P05;
  x = encode_input(f, true);
  EXPECT_EQ(x[52], 0.25);
  EXPECT_EQ(x[53], 0.5);
  EXPECT_EQ(x[54], 0.75);
  EXPECT_EQ(x[55], 1.0);
}

TEST(EncodeTest, SensitivityBlockRoundTripsExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    VisualField f;
    for (double& s : f.sensitivities) s = 40.0 * rng.uniform();
    if (trial % 3 == 0) f.sensitivities[trial % 52] = 40.0;
    const auto back = decode_sensitivities(encode_input(f, trial % 2 == 0));
    for (std::size_t i = 0; i < kNumLocations; ++i) {
      ASSERT_EQ(back[i], f.sensitivities[i]);
    }
  }
}

TEST(EyeSeriesTest, Validation) {
  EyeSeries e;
  e.eye_id = "x";
  for (int k = 0; k < 5; ++k) e.exams.push_back(VisualField{.exam_time = 0.5 * k});
  EXPECT_THROW(e.validate(), std::invalid_argument);
  e.exams.push_back(VisualField{.exam_time = 2.5});
  EXPECT_NO_THROW(e.validate());
  e.exams[3].exam_time = e.exams[2].exam_time;
  EXPECT_THROW(e.validate(), std::invalid_argument);
}

TEST(RngTest, StreamsAreDeterministicAndDistinct) {
  Rng a = Rng::stream(42, {1, 2});
  Rng b = Rng::stream(42, {1, 2});
  Rng c = Rng::stream(42, {1, 3});
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs = differs || x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, NormalMoments) {
  Rng rng(3);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum2 / n, 1.0, 0.01);
}

TEST(NormativeIoTest, RoundTripAndRejectsBadTables) {
  const NormativeModel& m = standard_normative();
  std::stringstream ss;
  write_normative(ss, m);
  const NormativeModel back = read_normative(ss);
  EXPECT_EQ(back.mean_at_60, m.mean_at_60);
  EXPECT_EQ(back.age_slope, m.age_slope);
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    EXPECT_EQ(back.cutoffs[i].p5, m.cutoffs[i].p5);
    EXPECT_EQ(back.cutoffs[i].p05, m.cutoffs[i].p05);
  }

  std::stringstream bad("# something else\n");
  EXPECT_THROW(read_normative(bad), DataError);

  NormativeModel broken = m;
  broken.cutoffs[4].p2 = broken.cutoffs[4].p5;
  std::stringstream out;
  write_normative(out, broken);
  EXPECT_THROW(read_normative(out), DataError);
}

}  // namespace
}  // namespace vfd
