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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vfd/field.hpp"
#include "vfd/neural/dense.hpp"

namespace vfd::nn {

inline constexpr std::size_t kHidden = 32;
inline constexpr std::size_t kLatent = 16;
inline constexpr std::size_t kOutput = kNumLocations;
inline constexpr int kDefaultMaskCount = 10;

enum class ModelKind { MAE, VAE };

/// One of the four trained networks: {MAE, VAE} x {with, without p-values}.
struct Variant {
  ModelKind kind = ModelKind::MAE;
  bool with_pvalues = false;

  std::size_t input_dim() const { return with_pvalues ? 2 * kNumLocations : kNumLocations; }
  /// "mae", "mae+p", "vae", "vae+p".
  std::string tag() const;
  static std::optional<Variant> parse(std::string_view tag);
  bool operator==(const Variant&) const = default;
};

inline constexpr std::array<Variant, 4> kAllVariants{
    Variant{ModelKind::MAE, true}, Variant{ModelKind::MAE, false},
    Variant{ModelKind::VAE, true}, Variant{ModelKind::VAE, false}};

/// Layer order (also the checkpoint order):
///   MAE: enc1 (in->32, ReLU), enc2 (32->16, ReLU), bottleneck (16->16, ReLU),
///        dec1 (16->32, ReLU), dec2 (32->52)
///   VAE: enc1, enc2, mu (16->16), log_sigma (16->16), dec1, dec2
/// The VAE's sigma head emits log sigma; sigma = exp(log sigma) > 0.
struct Autoencoder {
  Variant variant;
  std::vector<DenseLayer> layers;

  static Autoencoder create(Variant variant);
  /// create() followed by Glorot initialisation from `rng`.
  static Autoencoder initialized(Variant variant, Rng& rng);

  bool operator==(const Autoencoder&) const = default;
};

/// Activations kept for backprop. Layer l saw input x[l] and produced
/// pre-activation pre[l] and output y[l].
struct ForwardCache {
  std::vector<std::vector<double>> x, pre, y;
  std::vector<double> mu, log_sigma, sigma, eps, z;  // VAE only
  std::vector<double> output;
};

/// Forward pass. For the VAE, z = mu + sigma * eps with the supplied eps;
/// an empty eps means z = mu (inference).
ForwardCache forward(const Autoencoder& model, std::span<const double> input,
                     std::span<const double> eps = {});

/// Reverse-mode pass from dL/d(output) plus any direct loss terms on the
/// latent heads (dL/dmu, dL/dlog_sigma; empty for the MAE or when absent).
/// Gradients are accumulated into `grads`.
void backward(const Autoencoder& model, const ForwardCache& cache,
              std::span<const double> d_output, std::span<const double> d_mu,
              std::span<const double> d_log_sigma, Gradients& grads);

/// z = mu + sigma * eps with eps ~ N(0, I) drawn from `rng`.
std::vector<double> reparameterize(std::span<const double> mu,
                                   std::span<const double> sigma, Rng& rng);

enum class KlForm {
  /// (1/N) sum (sigma^2 + mu^2 - log sigma - 1/2)
  AsPrinted,
  /// (1/N) sum 1/2 (sigma^2 + mu^2 - log sigma^2 - 1)
  Textbook,
};

/// KL term over a batch: rows of `mu` / `sigma` are samples (row-major,
/// batch_size x latent). Summed over rows and dims, divided by batch_size.
/// Throws std::invalid_argument on non-positive sigma.
double kl_loss(std::span<const double> mu, std::span<const double> sigma,
               std::size_t batch_size, KlForm form = KlForm::AsPrinted);

struct Masked {
  std::vector<double> features;
  std::vector<std::size_t> indices;  // ascending
};

/// Zeroes `mask_count` distinct entries of the 52-entry sensitivity block.
/// Anything after position 52 (the p-value block) is left untouched.
Masked mask_input(std::span<const double> features, int mask_count, Rng& rng);

/// Mean squared error over all 52 locations.
double loss_mae(std::span<const double> predicted, std::span<const double> target);

struct LossConfig {
  double kl_weight = 1.0;
  KlForm kl_form = KlForm::AsPrinted;
};

struct LossParts {
  double recon = 0.0;
  double kl = 0.0;
  double total(const LossConfig& cfg) const { return recon + cfg.kl_weight * kl; }
};

/// Loss contribution of one sample in a batch of `batch_size` and its
/// gradients (already divided by batch_size) accumulated into `grads`.
/// `eps` is the VAE noise (empty for the MAE).
LossParts sample_loss_and_gradients(const Autoencoder& model,
                                    std::span<const double> input,
                                    std::span<const double> target,
                                    std::span<const double> eps,
                                    std::size_t batch_size, const LossConfig& cfg,
                                    Gradients* grads);

/// Inference: no masking, z = mu for the VAE. Returns the 52 reconstructed
/// sensitivities in dB, clamped to [0, 40]. Throws std::invalid_argument if
/// the feature length does not match the model's input.
FieldValues denoise(const Autoencoder& model, std::span<const double> features);

/// Encodes the field for the model's variant, denoises it, and recomputes TD
/// and categories. Time and age are preserved.
VisualField denoise_field(const Autoencoder& model, const VisualField& field,
                          const NormativeModel& norm);

}  // namespace vfd::nn
