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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vfd/rng.hpp"

namespace vfd::nn {

enum class Activation { Identity, ReLU };

/// Fully connected layer y = act(W x + b), W stored row-major (out x in).
struct DenseLayer {
  std::string name;
  std::size_t in = 0;
  std::size_t out = 0;
  Activation activation = Activation::Identity;
  std::vector<double> weights;  // out * in
  std::vector<double> bias;     // out

  DenseLayer() = default;
  DenseLayer(std::string name, std::size_t in, std::size_t out, Activation act);

  /// Glorot-uniform weights in +-sqrt(6 / (in + out)), zero bias.
  void init_glorot(Rng& rng);

  /// Writes the pre-activation and the activated output.
  void forward(std::span<const double> x, std::span<double> pre,
               std::span<double> y) const;

  bool operator==(const DenseLayer&) const = default;
};

struct DenseGrad {
  std::vector<double> weights;
  std::vector<double> bias;

  explicit DenseGrad(const DenseLayer& layer)
      : weights(layer.weights.size(), 0.0), bias(layer.bias.size(), 0.0) {}
  void zero();
};

/// Accumulates dL/dW and dL/db into `grad` and writes dL/dx into `dx`
/// (dx may be empty when the input gradient is not needed).
void backward(const DenseLayer& layer, std::span<const double> x,
              std::span<const double> pre, std::span<const double> dy,
              DenseGrad& grad, std::span<double> dx);

using Gradients = std::vector<DenseGrad>;

Gradients zero_gradients(const std::vector<DenseLayer>& layers);

}  // namespace vfd::nn
