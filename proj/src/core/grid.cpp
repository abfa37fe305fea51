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

#include "vfd/grid.hpp"

#include <stdexcept>

namespace vfd {
namespace {

constexpr std::array<int, 8> kRowY{21, 15, 9, 3, -3, -9, -15, -21};
constexpr std::array<int, 8> kRowFirstX{-9, -15, -21, -27, -27, -21, -15, -9};

}  // namespace

Grid24_2 build_grid() {
  Grid24_2 g;
  std::size_t k = 0;
  for (std::size_t row = 0; row < kRowY.size(); ++row) {
    for (int c = 0; c < g.row_sizes[row]; ++c) {
      g.points[k++] = GridPoint{kRowFirstX[row] + 6 * c, kRowY[row]};
    }
  }
  return g;
}

const Grid24_2& grid() {
  static const Grid24_2 g = build_grid();
  return g;
}

bool Grid24_2::is_blind_spot(int grid_index) const {
  return grid_index == blind_spot_indices[0] ||
         grid_index == blind_spot_indices[1];
}

GridPoint Grid24_2::at(int grid_index) const {
  if (grid_index < 1 || grid_index > static_cast<int>(kNumGridPoints)) {
    throw std::out_of_range("grid index out of range");
  }
  return points[static_cast<std::size_t>(grid_index - 1)];
}

std::optional<std::size_t> Grid24_2::location_of(int grid_index) const {
  if (grid_index < 1 || grid_index > static_cast<int>(kNumGridPoints) ||
      is_blind_spot(grid_index)) {
    return std::nullopt;
  }
  std::size_t slot = static_cast<std::size_t>(grid_index - 1);
  for (int b : blind_spot_indices) {
    if (grid_index > b) --slot;
  }
  return slot;
}

int Grid24_2::grid_index_of(std::size_t location) const {
  if (location >= kNumLocations) throw std::out_of_range("location out of range");
  int idx = static_cast<int>(location) + 1;
  for (int b : blind_spot_indices) {
    if (idx >= b) ++idx;
  }
  return idx;
}

GridPoint Grid24_2::location_point(std::size_t location) const {
  return at(grid_index_of(location));
}

std::optional<std::size_t> Grid24_2::find_location(int x_deg, int y_deg) const {
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    const GridPoint p = location_point(i);
    if (p.x_deg == x_deg && p.y_deg == y_deg) return i;
  }
  return std::nullopt;
}

}  // namespace vfd
