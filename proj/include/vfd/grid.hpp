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
#include <cstddef>
#include <optional>

namespace vfd {

/// Number of 24-2 test locations once the two blind-spot points are removed.
inline constexpr std::size_t kNumLocations = 52;
/// Full 24-2 pattern size including the blind spot.
inline constexpr std::size_t kNumGridPoints = 54;

struct GridPoint {
  int x_deg = 0;
  int y_deg = 0;
};

/// The 24-2 test pattern in right-eye orientation (blind spot temporal, +x).
///
/// Points are numbered 1..54 row-major from the top row (y = +21) downward
/// with rows of 4, 6, 8, 9, 9, 8, 6, 4 points. Grid indices 26 and 35 sit on
/// the physiologic blind spot at (15, +3) and (15, -3).
struct Grid24_2 {
  std::array<GridPoint, kNumGridPoints> points{};
  std::array<int, 2> blind_spot_indices{26, 35};
  std::array<int, 8> row_sizes{4, 6, 8, 9, 9, 8, 6, 4};

  bool is_blind_spot(int grid_index) const;
  /// Coordinates of a 1-based grid index.
  GridPoint at(int grid_index) const;
  /// 0-based location slot (0..51) of a 1-based grid index; nullopt for the
  /// blind spot.
  std::optional<std::size_t> location_of(int grid_index) const;
  /// 1-based grid index of a 0-based location slot.
  int grid_index_of(std::size_t location) const;
  /// Coordinates of a 0-based location slot.
  GridPoint location_point(std::size_t location) const;
  /// 0-based location slot at the given coordinates, if any.
  std::optional<std::size_t> find_location(int x_deg, int y_deg) const;
};

Grid24_2 build_grid();

/// Process-wide canonical grid.
const Grid24_2& grid();

}  // namespace vfd
