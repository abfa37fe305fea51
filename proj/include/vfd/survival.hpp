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
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vfd {

/// One eye: conversion time if it progressed (event), else last follow-up.
struct SurvivalInput {
  double time = 0.0;
  bool event = false;
};

struct KMRow {
  double time = 0.0;
  std::size_t at_risk = 0;
  std::size_t events = 0;
  std::size_t censored = 0;
  double survival = 1.0;
  double ci_low = 1.0;
  double ci_high = 1.0;
};

/// Product-limit survival curve. rows[0] is t = 0 with S = 1; then one row
/// per distinct observed time, ascending.
struct KMCurve {
  std::vector<KMRow> rows;

  /// Right-continuous step value S(t).
  double survival_at(double t) const;
};

inline constexpr double kKmZ95 = 1.959963984540054;

/// Kaplan-Meier estimate with log-transformed Greenwood 95% bands clipped to
/// [0, 1]. Events at a tied time are removed before censorings. Throws
/// std::invalid_argument on empty input or a non-positive time.
KMCurve km_estimate(std::span<const SurvivalInput> inputs);

/// Columns: time, at_risk, events, censored, S, ci_low, ci_high.
void write_km_csv(std::ostream& os, const KMCurve& curve);

/// Standalone SVG overlaying labelled step curves with their bands.
std::string km_svg(const std::vector<std::pair<std::string, KMCurve>>& curves,
                   const std::string& title);

}  // namespace vfd
