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

#include "vfd/neural/trainer.hpp"

namespace vfd::nn {

// Text container, version 1:
//   vfd-checkpoint 1
//   variant <tag>
//   config_hash <16 hex digits>
//   epoch <int>
//   val_loss <hexfloat>
//   layers <count>
//   then per layer: "layer <name> <in> <out> <relu|identity>",
//   "w <hexfloat...>" and "b <hexfloat...>".
// Hex floats make save -> load bit-exact.
void write_checkpoint(std::ostream& os, const CheckpointRecord& ckpt);
CheckpointRecord read_checkpoint(std::istream& is);

void save_checkpoint(const std::string& path, const CheckpointRecord& ckpt);
CheckpointRecord load_checkpoint(const std::string& path);

}  // namespace vfd::nn
