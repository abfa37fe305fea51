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
#include <vector>

#include "vfd/neural/dense.hpp"

namespace vfd::nn {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment estimates, shaped like the layers they track.
struct AdamState {
  Gradients m;
  Gradients v;
  std::int64_t step = 0;

  explicit AdamState(const std::vector<DenseLayer>& layers)
      : m(zero_gradients(layers)), v(zero_gradients(layers)) {}
  bool operator==(const AdamState& o) const;
};

/// One bias-corrected Adam update of every weight and bias.
void adam_step(std::vector<DenseLayer>& layers, const Gradients& grads,
               AdamState& state, double lr, const AdamHyper& hyper = {});

}  // namespace vfd::nn
