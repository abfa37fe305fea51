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

// vfd: simulate, denoise and analyze longitudinal 24-2 visual fields.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vfd/commands.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> eyes;
  std::optional<int> epochs;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run configuration");
  cmd->add_option("--seed", c.seed, "Master seed (simulation and training)");
  cmd->add_option("--eyes", c.eyes, "Eyes per setting");
  cmd->add_option("--epochs", c.epochs, "Maximum training epochs");
  cmd->add_option("--out", c.out, "Run directory");
}

vfd::app::RunConfig resolve(const Common& c) {
  vfd::app::RunConfig cfg;
  if (!c.config.empty()) cfg = vfd::app::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.eyes) cfg.simulation.eyes = *c.eyes;
  if (c.epochs) cfg.train.max_epochs = *c.epochs;
  if (!c.out.empty()) cfg.output = c.out;
  if (cfg.simulation.eyes <= 0) throw std::invalid_argument("--eyes must be positive");
  cfg.train.validate();
  return cfg;
}

std::vector<vfd::nn::Variant> parse_variants(const std::string& s) {
  if (s == "all") return {vfd::nn::kAllVariants.begin(), vfd::nn::kAllVariants.end()};
  const auto v = vfd::nn::Variant::parse(s);
  if (!v) throw std::invalid_argument("unknown variant '" + s + "' (mae, mae+p, vae, vae+p, all)");
  return {*v};
}

std::vector<vfd::Pipeline> parse_pipelines(const std::string& s) {
  if (s == "all") return {vfd::kAllPipelines.begin(), vfd::kAllPipelines.end()};
  const auto p = vfd::parse_pipeline(s);
  if (!p) throw std::invalid_argument("unknown pipeline '" + s + "' (Raw, MAE+p, MAE, VAE+p, VAE, all)");
  return {*p};
}

std::vector<vfd::Method> parse_methods(const std::string& s) {
  if (s == "all") return {vfd::kAllMethods.begin(), vfd::kAllMethods.end()};
  const auto m = vfd::parse_method(s);
  if (!m) throw std::invalid_argument("unknown method '" + s + "' (PLR, MD, GRI, all)");
  return {*m};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual-field denoising and glaucoma progression toolkit"};
  app.require_subcommand(1);

  Common common;
  std::string variant = "all";
  std::string pipeline = "all";
  std::string method = "all";

  auto* simulate = app.add_subcommand("simulate", "Simulate the five cohorts");
  add_common(simulate, common);
  auto* train = app.add_subcommand("train", "Train denoising networks");
  add_common(train, common);
  train->add_option("--variant", variant, "mae, mae+p, vae, vae+p or all");
  auto* denoise = app.add_subcommand("denoise", "Write denoised cohort files");
  add_common(denoise, common);
  denoise->add_option("--variant", variant, "mae, mae+p, vae, vae+p or all");
  auto* analyze = app.add_subcommand("analyze", "Run progression detection");
  add_common(analyze, common);
  analyze->add_option("--pipeline", pipeline, "Raw, MAE+p, MAE, VAE+p, VAE or all");
  analyze->add_option("--method", method, "PLR, MD, GRI or all");
  auto* report = app.add_subcommand("report", "Build tables and survival plots");
  add_common(report, common);
  auto* run = app.add_subcommand("run", "simulate, train, analyze and report in one go");
  add_common(run, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    const vfd::app::RunConfig cfg = resolve(common);
    std::ostream& log = std::cerr;
    if (*simulate) {
      vfd::app::cmd_simulate(cfg, log);
    } else if (*train) {
      for (const auto& v : parse_variants(variant)) vfd::app::cmd_train(cfg, v, log);
    } else if (*denoise) {
      for (const auto& v : parse_variants(variant)) vfd::app::cmd_denoise(cfg, v, log);
    } else if (*analyze) {
      vfd::app::cmd_analyze(cfg, parse_pipelines(pipeline), parse_methods(method), log);
    } else if (*report) {
      vfd::app::cmd_report(cfg, log);
    } else if (*run) {
      vfd::app::run_pipeline(cfg, log);
    }
  } catch (const vfd::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}
