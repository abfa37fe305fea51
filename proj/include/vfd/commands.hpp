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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vfd/config.hpp"

namespace vfd::app {

namespace fs = std::filesystem;

/// Artifact layout under the run's output directory.
struct RunLayout {
  fs::path root;

  fs::path config() const { return root / "config.json"; }
  fs::path manifest() const { return root / "manifest.json"; }
  fs::path normative() const { return root / "normative_24_2.txt"; }
  fs::path cohort(ScenarioKind kind) const;
  fs::path checkpoint(const nn::Variant& v) const;
  fs::path loss_log(const nn::Variant& v) const;
  fs::path denoised(const nn::Variant& v, ScenarioKind kind) const;
  fs::path verdicts(Pipeline p, Method m) const;
  fs::path summary(Pipeline p, Method m) const;
  fs::path report_dir() const { return root / "report"; }
};

/// File-name form of a variant or pipeline tag ("mae_p", "MAE_p", ...).
std::string file_tag(const nn::Variant& v);
std::string file_tag(Pipeline p);

/// Writes one cohort per configured setting, the normative table, the
/// resolved config and a manifest with seeds and scenario tables.
void cmd_simulate(const RunConfig& cfg, std::ostream& log);

/// Trains one variant on the pooled cohorts and writes its checkpoint and
/// per-epoch loss log. Returns the checkpoint.
nn::CheckpointRecord cmd_train(const RunConfig& cfg, const nn::Variant& variant,
                               std::ostream& log);

/// Writes denoised copies of every cohort with the variant's checkpoint.
void cmd_denoise(const RunConfig& cfg, const nn::Variant& variant, std::ostream& log);

/// Runs the progressive harness for every eye under each pipeline x method
/// and writes verdict and summary files.
void cmd_analyze(const RunConfig& cfg, const std::vector<Pipeline>& pipelines,
                 const std::vector<Method>& methods, std::ostream& log);

/// Writes table1.csv (per setting), table2.csv (pooled), report.md and the
/// per-method Kaplan-Meier overlays from the summary and verdict files.
void cmd_report(const RunConfig& cfg, std::ostream& log);

/// simulate -> train (all four variants) -> analyze (all) -> report.
void run_pipeline(const RunConfig& cfg, std::ostream& log);

/// One row of a verdict file.
struct VerdictRow {
  std::string eye_id;
  std::string setting;
  Method method = Method::PLR;
  Pipeline pipeline = Pipeline::Raw;
  bool progressed = false;
  std::optional<double> conversion_time;
  double last_followup = 0.0;
  std::string trace;  // '0'/'1' per analysis point
};

std::vector<VerdictRow> read_verdicts(const fs::path& path);

/// One row of a summary file: a setting name or "all".
struct SummaryRow {
  std::string setting;
  CohortSummary summary;
};

std::vector<SummaryRow> read_summary(const fs::path& path);

}  // namespace vfd::app
