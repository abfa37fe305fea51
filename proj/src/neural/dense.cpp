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

#include "vfd/neural/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vfd::nn {

DenseLayer::DenseLayer(std::string name_, std::size_t in_, std::size_t out_,
                       Activation act)
    : name(std::move(name_)),
      in(in_),
      out(out_),
      activation(act),
      weights(in_ * out_, 0.0),
      bias(out_, 0.0) {}

void DenseLayer::init_glorot(Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  for (double& w : weights) w = limit * (2.0 * rng.uniform() - 1.0);
  std::fill(bias.begin(), bias.end(), 0.0);
}

void DenseLayer::forward(std::span<const double> x, std::span<double> pre,
                         std::span<double> y) const {
  if (x.size() != in || pre.size() != out || y.size() != out) {
    throw std::invalid_argument("layer " + name + ": dimension mismatch");
  }
  for (std::size_t o = 0; o < out; ++o) {
    const double* w = weights.data() + o * in;
    double acc = bias[o];
    for (std::size_t i = 0; i < in; ++i) acc += w[i] * x[i];
    pre[o] = acc;
    y[o] = activation == Activation::ReLU ? (acc > 0.0 ? acc : 0.0) : acc;
  }
}

void DenseGrad::zero() {
  std::fill(weights.begin(), weights.end(), 0.0);
  std::fill(bias.begin(), bias.end(), 0.0);
}

void backward(const DenseLayer& layer, std::span<const double> x,
              std::span<const double> pre, std::span<const double> dy,
              DenseGrad& grad, std::span<double> dx) {
  const std::size_t in = layer.in;
  if (!dx.empty()) std::fill(dx.begin(), dx.end(), 0.0);
  for (std::size_t o = 0; o < layer.out; ++o) {
    double d = dy[o];
    if (layer.activation == Activation::ReLU && !(pre[o] > 0.0)) d = 0.0;
    if (d == 0.0) continue;
    grad.bias[o] += d;
    double* gw = grad.weights.data() + o * in;
    for (std::size_t i = 0; i < in; ++i) gw[i] += d * x[i];
    if (!dx.empty()) {
      const double* w = layer.weights.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) dx[i] += d * w[i];
    }
  }
}

Gradients zero_gradients(const std::vector<DenseLayer>& layers) {
  Gradients g;
  g.reserve(layers.size());
  for (const auto& l : layers) g.emplace_back(l);
  return g;
}

}  // namespace vfd::nn
