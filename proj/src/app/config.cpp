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

#include "vfd/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vfd::app {
namespace {

using nlohmann::json;

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const char* where) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw std::invalid_argument(std::string("unknown key ") + where + "." + k);
  }
}

}  // namespace

ScenarioSpec SimulationConfig::spec(ScenarioKind kind) const {
  ScenarioSpec s;
  s.kind = kind;
  s.n_eyes = eyes;
  s.n_exams = exams;
  s.duration = duration;
  s.baseline_age = baseline_age;
  s.age_slope = age_slope;
  s.full_factorial = full_factorial;
  return s;
}

nn::TrainConfig RunConfig::train_config() const {
  nn::TrainConfig t = train;
  t.seed = seed;
  return t;
}

std::string to_json_text(const RunConfig& c) {
  json settings = json::array();
  for (ScenarioKind k : c.simulation.settings) settings.push_back(std::string(setting_name(k)));
  const json j = {
      {"seed", c.seed},
      {"output", c.output},
      {"simulation",
       {{"eyes", c.simulation.eyes},
        {"exams", c.simulation.exams},
        {"duration", c.simulation.duration},
        {"baseline_age", c.simulation.baseline_age},
        {"age_slope", c.simulation.age_slope},
        {"settings", settings},
        {"full_factorial", c.simulation.full_factorial}}},
      {"noise",
       {{"model", c.noise.kind == NoiseModel::Kind::Homoscedastic ? "homoscedastic"
                                                                  : "sensitivity_dependent"},
        {"log_slope", c.noise.log_slope},
        {"log_intercept", c.noise.log_intercept},
        {"max_sd", c.noise.max_sd},
        {"constant_sd", c.noise.constant_sd}}},
      {"train",
       {{"batch_size", c.train.batch_size},
        {"learning_rate", c.train.learning_rate},
        {"lr_factor", c.train.lr_factor},
        {"lr_patience", c.train.lr_patience},
        {"lr_threshold", c.train.lr_threshold},
        {"max_epochs", c.train.max_epochs},
        {"train_fraction", c.train.train_fraction},
        {"val_fraction", c.train.val_fraction},
        {"test_fraction", c.train.test_fraction},
        {"mask_count", c.train.mask_count},
        {"kl_weight", c.train.kl_weight},
        {"kl_form", c.train.kl_form == nn::KlForm::AsPrinted ? "as_printed" : "textbook"}}},
      {"detection",
       {{"plr_slope", c.detection.plr_slope},
        {"plr_p", c.detection.plr_p},
        {"plr_min_locations", c.detection.plr_min_locations},
        {"md_slope", c.detection.md_slope},
        {"md_p", c.detection.md_p},
        {"gri_p", c.detection.gri_p},
        {"gri_normalization", c.detection.gri_normalization},
        {"gri_cutoff", c.detection.gri_cutoff},
        {"gri_outlier_z", c.detection.gri_outlier_z},
        {"gri_s0_sd", c.detection.gri_s0_sd}}}};
  return j.dump(2) + "\n";
}

RunConfig from_json_text(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  try {
    reject_unknown(j, {"seed", "output", "simulation", "noise", "train", "detection"}, "");
    take(j, "seed", c.seed);
    take(j, "output", c.output);
    if (j.contains("simulation")) {
      const json& s = j["simulation"];
      reject_unknown(s, {"eyes", "exams", "duration", "baseline_age", "age_slope",
                         "settings", "full_factorial"}, "simulation");
      take(s, "eyes", c.simulation.eyes);
      take(s, "exams", c.simulation.exams);
      take(s, "duration", c.simulation.duration);
      take(s, "baseline_age", c.simulation.baseline_age);
      take(s, "age_slope", c.simulation.age_slope);
      take(s, "full_factorial", c.simulation.full_factorial);
      if (s.contains("settings")) {
        c.simulation.settings.clear();
        for (const auto& name : s["settings"]) {
          const auto k = parse_setting(name.get<std::string>());
          if (!k) throw std::invalid_argument("config: unknown setting " + name.dump());
          c.simulation.settings.push_back(*k);
        }
      }
    }
    if (j.contains("noise")) {
      const json& n = j["noise"];
      reject_unknown(n, {"model", "log_slope", "log_intercept", "max_sd", "constant_sd"},
                     "noise");
      std::string model = "sensitivity_dependent";
      take(n, "model", model);
      if (model == "homoscedastic") {
        c.noise.kind = NoiseModel::Kind::Homoscedastic;
      } else if (model != "sensitivity_dependent") {
        throw std::invalid_argument("config: unknown noise model " + model);
      }
      take(n, "log_slope", c.noise.log_slope);
      take(n, "log_intercept", c.noise.log_intercept);
      take(n, "max_sd", c.noise.max_sd);
      take(n, "constant_sd", c.noise.constant_sd);
    }
    if (j.contains("train")) {
      const json& t = j["train"];
      reject_unknown(t, {"batch_size", "learning_rate", "lr_factor", "lr_patience",
                         "lr_threshold", "max_epochs", "train_fraction", "val_fraction",
                         "test_fraction", "mask_count", "kl_weight", "kl_form"},
                     "train");
      take(t, "batch_size", c.train.batch_size);
      take(t, "learning_rate", c.train.learning_rate);
      take(t, "lr_factor", c.train.lr_factor);
      take(t, "lr_patience", c.train.lr_patience);
      take(t, "lr_threshold", c.train.lr_threshold);
      take(t, "max_epochs", c.train.max_epochs);
      take(t, "train_fraction", c.train.train_fraction);
      take(t, "val_fraction", c.train.val_fraction);
      take(t, "test_fraction", c.train.test_fraction);
      take(t, "mask_count", c.train.mask_count);
      take(t, "kl_weight", c.train.kl_weight);
      std::string form = "as_printed";
      take(t, "kl_form", form);
      if (form == "textbook") {
        c.train.kl_form = nn::KlForm::Textbook;
      } else if (form != "as_printed") {
        throw std::invalid_argument("config: unknown kl_form " + form);
      }
    }
    if (j.contains("detection")) {
      const json& d = j["detection"];
      reject_unknown(d, {"plr_slope", "plr_p", "plr_min_locations", "md_slope", "md_p",
                         "gri_p", "gri_normalization", "gri_cutoff", "gri_outlier_z",
                         "gri_s0_sd"},
                     "detection");
      take(d, "plr_slope", c.detection.plr_slope);
      take(d, "plr_p", c.detection.plr_p);
      take(d, "plr_min_locations", c.detection.plr_min_locations);
      take(d, "md_slope", c.detection.md_slope);
      take(d, "md_p", c.detection.md_p);
      take(d, "gri_p", c.detection.gri_p);
      take(d, "gri_normalization", c.detection.gri_normalization);
      take(d, "gri_cutoff", c.detection.gri_cutoff);
      take(d, "gri_outlier_z", c.detection.gri_outlier_z);
      take(d, "gri_s0_sd", c.detection.gri_s0_sd);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.train.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace vfd::app
