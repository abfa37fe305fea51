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

#include "vfd/neural/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vfd::nn {
namespace {

void run_layer(const Autoencoder& m, ForwardCache& c, std::size_t l,
               std::span<const double> x) {
  const DenseLayer& layer = m.layers[l];
  c.x[l].assign(x.begin(), x.end());
  c.pre[l].assign(layer.out, 0.0);
  c.y[l].assign(layer.out, 0.0);
  layer.forward(c.x[l], c.pre[l], c.y[l]);
}

double kl_term(double mu, double sigma, KlForm form) {
  const double log_sigma = std::log(sigma);
  if (form == KlForm::AsPrinted) {
    return sigma * sigma + mu * mu - log_sigma - 0.5;
  }
  return 0.5 * (sigma * sigma + mu * mu - 2.0 * log_sigma - 1.0);
}

}  // namespace

std::string Variant::tag() const {
  std::string t = kind == ModelKind::MAE ? "mae" : "vae";
  if (with_pvalues) t += "+p";
  return t;
}

std::optional<Variant> Variant::parse(std::string_view tag) {
  for (const Variant& v : kAllVariants) {
    if (v.tag() == tag) return v;
  }
  return std::nullopt;
}

Autoencoder Autoencoder::create(Variant variant) {
  Autoencoder m;
  m.variant = variant;
  const std::size_t in = variant.input_dim();
  m.layers.emplace_back("enc1", in, kHidden, Activation::ReLU);
  m.layers.emplace_back("enc2", kHidden, kLatent, Activation::ReLU);
  if (variant.kind == ModelKind::MAE) {
    m.layers.emplace_back("bottleneck", kLatent, kLatent, Activation::ReLU);
  } else {
    m.layers.emplace_back("mu", kLatent, kLatent, Activation::Identity);
    m.layers.emplace_back("log_sigma", kLatent, kLatent, Activation::Identity);
  }
  m.layers.emplace_back("dec1", kLatent, kHidden, Activation::ReLU);
  m.layers.emplace_back("dec2", kHidden, kOutput, Activation::Identity);
  return m;
}

Autoencoder Autoencoder::initialized(Variant variant, Rng& rng) {
  Autoencoder m = create(variant);
  for (DenseLayer& l : m.layers) l.init_glorot(rng);
  return m;
}

ForwardCache forward(const Autoencoder& model, std::span<const double> input,
                     std::span<const double> eps) {
  if (input.size() != model.variant.input_dim()) {
    throw std::invalid_argument("input length does not match model input");
  }
  const std::size_t n = model.layers.size();
  ForwardCache c;
  c.x.resize(n);
  c.pre.resize(n);
  c.y.resize(n);
  if (model.variant.kind == ModelKind::MAE) {
    std::span<const double> x = input;
    for (std::size_t l = 0; l < n; ++l) {
      run_layer(model, c, l, x);
      x = c.y[l];
    }
    c.output = c.y[n - 1];
    return c;
  }

  run_layer(model, c, 0, input);
  run_layer(model, c, 1, c.y[0]);
  run_layer(model, c, 2, c.y[1]);
  run_layer(model, c, 3, c.y[1]);
  c.mu = c.y[2];
  c.log_sigma = c.y[3];
  c.sigma.resize(kLatent);
  c.z.resize(kLatent);
  if (!eps.empty() && eps.size() != kLatent) {
    throw std::invalid_argument("eps must have latent dimension");
  }
  c.eps.assign(eps.begin(), eps.end());
  for (std::size_t d = 0; d < kLatent; ++d) {
    c.sigma[d] = std::exp(c.log_sigma[d]);
    c.z[d] = eps.empty() ? c.mu[d] : c.mu[d] + c.sigma[d] * eps[d];
  }
  run_layer(model, c, 4, c.z);
  run_layer(model, c, 5, c.y[4]);
  c.output = c.y[5];
  return c;
}

void backward(const Autoencoder& model, const ForwardCache& cache,
              std::span<const double> d_output, std::span<const double> d_mu,
              std::span<const double> d_log_sigma, Gradients& grads) {
  const auto& L = model.layers;
  const std::size_t n = L.size();
  std::vector<double> dy(d_output.begin(), d_output.end());
  std::vector<double> dx;

  auto step = [&](std::size_t l, bool need_dx) {
    dx.assign(need_dx ? L[l].in : 0, 0.0);
    nn::backward(L[l], cache.x[l], cache.pre[l], dy, grads[l], dx);
  };

  if (model.variant.kind == ModelKind::MAE) {
    for (std::size_t l = n; l-- > 0;) {
      step(l, l > 0);
      dy.swap(dx);
    }
    return;
  }

  step(5, true);
  dy.swap(dx);
  step(4, true);
  const std::vector<double> dz = dx;

  std::vector<double> dmu(kLatent), dls(kLatent);
  for (std::size_t d = 0; d < kLatent; ++d) {
    dmu[d] = dz[d] + (d_mu.empty() ? 0.0 : d_mu[d]);
    const double dsigma = cache.eps.empty() ? 0.0 : dz[d] * cache.eps[d];
    dls[d] = dsigma * cache.sigma[d] + (d_log_sigma.empty() ? 0.0 : d_log_sigma[d]);
  }
  dy = dmu;
  step(2, true);
  std::vector<double> dh = dx;
  dy = dls;
  step(3, true);
  for (std::size_t i = 0; i < dh.size(); ++i) dh[i] += dx[i];
  dy = std::move(dh);
  step(1, true);
  dy.swap(dx);
  step(0, false);
}

std::vector<double> reparameterize(std::span<const double> mu,
                                   std::span<const double> sigma, Rng& rng) {
  if (mu.size() != sigma.size()) throw std::invalid_argument("mu/sigma size mismatch");
  std::vector<double> z(mu.size());
  for (std::size_t d = 0; d < mu.size(); ++d) z[d] = mu[d] + sigma[d] * rng.normal();
  return z;
}

double kl_loss(std::span<const double> mu, std::span<const double> sigma,
               std::size_t batch_size, KlForm form) {
  if (mu.size() != sigma.size()) throw std::invalid_argument("mu/sigma size mismatch");
  if (batch_size == 0) throw std::invalid_argument("empty batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw std::invalid_argument("sigma must be positive");
    sum += kl_term(mu[i], sigma[i], form);
  }
  return sum / static_cast<double>(batch_size);
}

Masked mask_input(std::span<const double> features, int mask_count, Rng& rng) {
  if (features.size() < kNumLocations) {
    throw std::invalid_argument("features lack a 52-entry sensitivity block");
  }
  if (mask_count < 0 || mask_count >= static_cast<int>(kNumLocations)) {
    throw std::invalid_argument("mask_count must be in [0, 52)");
  }
  Masked m{{features.begin(), features.end()}, {}};
  std::array<std::size_t, kNumLocations> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first mask_count slots are a uniform sample.
  for (int k = 0; k < mask_count; ++k) {
    const auto j = static_cast<std::size_t>(k) +
                   rng.below(kNumLocations - static_cast<std::size_t>(k));
    std::swap(order[static_cast<std::size_t>(k)], order[j]);
    m.features[order[static_cast<std::size_t>(k)]] = 0.0;
    m.indices.push_back(order[static_cast<std::size_t>(k)]);
  }
  std::sort(m.indices.begin(), m.indices.end());
  return m;
}

double loss_mae(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.size() != kNumLocations || target.size() != kNumLocations) {
    throw std::invalid_argument("loss_mae expects 52-vectors");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    const double d = predicted[i] - target[i];
    sum += d * d;
  }
  return sum / static_cast<double>(kNumLocations);
}

LossParts sample_loss_and_gradients(const Autoencoder& model,
                                    std::span<const double> input,
                                    std::span<const double> target,
                                    std::span<const double> eps,
                                    std::size_t batch_size, const LossConfig& cfg,
                                    Gradients* grads) {
  const ForwardCache c = forward(model, input, eps);
  const double inv_n = 1.0 / static_cast<double>(batch_size);
  LossParts parts;
  parts.recon = loss_mae(c.output, target) * inv_n;

  const bool vae = model.variant.kind == ModelKind::VAE;
  std::vector<double> d_mu, d_ls;
  if (vae) {
    parts.kl = kl_loss(c.mu, c.sigma, batch_size, cfg.kl_form);
    d_mu.resize(kLatent);
    d_ls.resize(kLatent);
    for (std::size_t d = 0; d < kLatent; ++d) {
      const double s2 = c.sigma[d] * c.sigma[d];
      if (cfg.kl_form == KlForm::AsPrinted) {
        d_mu[d] = cfg.kl_weight * 2.0 * c.mu[d] * inv_n;
        d_ls[d] = cfg.kl_weight * (2.0 * s2 - 1.0) * inv_n;
      } else {
        d_mu[d] = cfg.kl_weight * c.mu[d] * inv_n;
        d_ls[d] = cfg.kl_weight * (s2 - 1.0) * inv_n;
      }
    }
  }
  if (grads != nullptr) {
    std::vector<double> d_out(kOutput);
    const double scale = 2.0 / static_cast<double>(kOutput) * inv_n;
    for (std::size_t i = 0; i < kOutput; ++i) d_out[i] = scale * (c.output[i] - target[i]);
    backward(model, c, d_out, d_mu, d_ls, *grads);
  }
  return parts;
}

FieldValues denoise(const Autoencoder& model, std::span<const double> features) {
  if (features.size() != model.variant.input_dim()) {
    throw std::invalid_argument("feature length does not match variant " +
                                model.variant.tag());
  }
  const ForwardCache c = forward(model, features);
  FieldValues s{};
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    s[i] = std::clamp(c.output[i] * kSensitivityScale, kMinSensitivity, kMaxSensitivity);
  }
  return s;
}

VisualField denoise_field(const Autoencoder& model, const VisualField& field,
                          const NormativeModel& norm) {
  const auto x = encode_input(field, model.variant.with_pvalues);
  return make_field(denoise(model, x), field.exam_time, field.age_at_exam, norm);
}

}  // namespace vfd::nn
