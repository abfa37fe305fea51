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

#include <cstdint>
#include <string>
#include <vector>

#include "vfd/detect.hpp"
#include "vfd/neural/trainer.hpp"
#include "vfd/simulator.hpp"

namespace vfd::app {

struct SimulationConfig {
  int eyes = 376;
  int exams = 20;
  double duration = 9.5;
  double baseline_age = 60.0;
  double age_slope = -0.1;
  std::vector<ScenarioKind> settings{kAllScenarios.begin(), kAllScenarios.end()};
  bool full_factorial = false;

  ScenarioSpec spec(ScenarioKind kind) const;
};

/// Everything a run needs. Serialises to a single JSON document; a saved
/// config reproduces the same artifacts.
struct RunConfig {
  std::uint64_t seed = 42;  // drives simulation noise and training
  SimulationConfig simulation;
  NoiseModel noise;
  nn::TrainConfig train;
  DetectionConfig detection;
  std::string output = "vfd_run";

  /// Train config with the run seed applied.
  nn::TrainConfig train_config() const;
};

std::string to_json_text(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys or bad values throw
/// std::invalid_argument.
RunConfig from_json_text(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace vfd::app
