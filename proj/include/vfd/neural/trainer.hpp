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
#include <functional>
#include <string>
#include <vector>

#include "vfd/field.hpp"
#include "vfd/neural/autoencoder.hpp"

namespace vfd::nn {

struct TrainConfig {
  int batch_size = 32;
  double learning_rate = 1e-4;
  double lr_factor = 0.1;
  int lr_patience = 5;
  /// Relative improvement a validation loss needs to reset the plateau
  /// counter (same rule as PyTorch's ReduceLROnPlateau default).
  double lr_threshold = 1e-4;
  int max_epochs = 200;
  std::uint64_t seed = 42;
  double train_fraction = 0.70;
  double val_fraction = 0.15;
  double test_fraction = 0.15;
  int mask_count = kDefaultMaskCount;
  double kl_weight = 1.0;
  KlForm kl_form = KlForm::AsPrinted;

  /// Throws std::invalid_argument on batch_size < 1, fractions not summing
  /// to 1, or other out-of-range values.
  void validate() const;
  /// Stable text form; the config hash is FNV-1a over this string.
  std::string canonical() const;
  std::uint64_t hash(const Variant& variant) const;
};

/// Reduce-on-plateau learning-rate schedule on validation loss.
class PlateauScheduler {
 public:
  PlateauScheduler(double lr, double factor, int patience, double threshold)
      : lr_(lr), factor_(factor), patience_(patience), threshold_(threshold) {}

  /// Feeds one epoch's validation loss; returns the learning rate to use next.
  double step(double val_loss);
  double lr() const { return lr_; }
  int bad_epochs() const { return bad_epochs_; }

 private:
  double lr_;
  double factor_;
  int patience_;
  double threshold_;
  double best_ = 0.0;
  bool has_best_ = false;
  int bad_epochs_ = 0;
};

struct CheckpointRecord {
  Autoencoder params;
  int epoch = 0;  // 1-based epoch the parameters were taken after
  double val_loss = 0.0;
  std::uint64_t config_hash = 0;

  bool operator==(const CheckpointRecord&) const = default;
};

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double train_recon = 0.0;
  double train_kl = 0.0;
  double val_loss = 0.0;
  double val_recon = 0.0;
  double val_kl = 0.0;
};

struct FitResult {
  CheckpointRecord best;
  std::vector<EpochLog> history;
};

/// Eye-level split into train/validation/test index lists.
struct EyeSplit {
  std::vector<std::size_t> train, val, test;
};
EyeSplit split_by_eye(std::size_t n_eyes, const TrainConfig& cfg);

/// Flattens the exams of the selected eyes.
std::vector<VisualField> gather_exams(const std::vector<EyeSeries>& eyes,
                                      const std::vector<std::size_t>& indices);

/// Trains one variant with Adam, reduce-on-plateau scheduling and
/// best-validation checkpointing. Deterministic for a given seed.
/// Throws std::invalid_argument if either split is empty.
FitResult fit(Variant variant, const std::vector<VisualField>& train,
              const std::vector<VisualField>& val, const TrainConfig& cfg,
              const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace vfd::nn
