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

#include "vfd/neural/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace vfd::nn {
namespace {

void update(std::vector<double>& p, const std::vector<double>& g,
            std::vector<double>& m, std::vector<double>& v, double lr_t,
            const AdamHyper& h, double bc2_sqrt) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
    v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g[i] * g[i];
    p[i] -= lr_t * m[i] / (std::sqrt(v[i]) / bc2_sqrt + h.eps);
  }
}

bool same(const Gradients& a, const Gradients& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (a[l].weights != b[l].weights || a[l].bias != b[l].bias) return false;
  }
  return true;
}

}  // namespace

bool AdamState::operator==(const AdamState& o) const {
  return step == o.step && same(m, o.m) && same(v, o.v);
}

void adam_step(std::vector<DenseLayer>& layers, const Gradients& grads,
               AdamState& state, double lr, const AdamHyper& hyper) {
  if (grads.size() != layers.size() || state.m.size() != layers.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(hyper.beta1, t);
  const double bc2_sqrt = std::sqrt(1.0 - std::pow(hyper.beta2, t));
  // p -= lr * m_hat / (sqrt(v_hat) + eps), with m_hat = m / bc1 folded into lr.
  const double lr_t = lr / bc1;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weights, grads[l].weights, state.m[l].weights,
           state.v[l].weights, lr_t, hyper, bc2_sqrt);
    update(layers[l].bias, grads[l].bias, state.m[l].bias, state.v[l].bias, lr_t,
           hyper, bc2_sqrt);
  }
}

}  // namespace vfd::nn
