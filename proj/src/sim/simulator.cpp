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

#include "vfd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace vfd {
namespace {

struct Depth {
  int x;
  int y;
  double db;  // below the age-60 normal
};

// Hand-authored defects, right-eye orientation (nasal is -x).
const std::vector<Depth>& inferior_nasal_defect() {
  static const std::vector<Depth> d{
      {-27, -3, 15.0}, {-21, -3, 14.0}, {-15, -3, 12.0}, {-9, -3, 9.0},
      {-21, -9, 14.0}, {-15, -9, 12.0}, {-9, -9, 9.0},   {-15, -15, 11.0},
      {-9, -15, 8.0},  {-9, -21, 8.0}};
  return d;
}

const std::vector<Depth>& superior_arcuate() {
  static const std::vector<Depth> d{
      {-27, 3, 10.0}, {-21, 3, 10.0}, {-21, 9, 12.0}, {-15, 9, 13.0},
      {-9, 9, 11.0},  {-3, 9, 9.0},   {3, 9, 9.0},    {9, 9, 10.0},
      {15, 9, 8.0},   {-15, 15, 14.0}, {-9, 15, 15.0}, {-3, 15, 12.0},
      {3, 15, 10.0},  {9, 15, 9.0}};
  return d;
}

using Coords = std::vector<std::pair<int, int>>;

const Coords kNasalScotoma{{-27, -3}, {-21, -3}, {-21, -9}, {-15, -9}};
const Coords kParacentral{{-9, 3}, {-3, 3}, {-9, 9}, {-3, 9}};
const Coords kNasalStep{{-27, -3}, {-21, -3}, {-15, -3}, {-21, -9},
                        {-15, -9}, {-9, -9},  {-15, -15}, {-9, -15}};
// Superior arcuate reaching (-3, 3), about 4.2 degrees from fixation.
const Coords kArcuateToFixation{{-3, 3},  {-9, 3},  {-3, 9},  {-9, 9},
                                {-15, 9}, {-21, 9}, {-9, 15}, {-15, 15}};
const Coords kPairedArcuates{
    {-21, 9},  {-15, 9},  {-9, 9},  {-3, 9},  {3, 9},  {9, 9},  {-9, 15},  {-3, 15},
    {-21, -9}, {-15, -9}, {-9, -9}, {-3, -9}, {3, -9}, {9, -9}, {-9, -15}, {-3, -15}};

std::vector<std::size_t> resolve(const Coords& coords) {
  std::vector<std::size_t> out;
  for (auto [x, y] : coords) {
    auto loc = grid().find_location(x, y);
    if (!loc) throw std::logic_error("scotoma coordinate not on 24-2 grid");
    out.push_back(*loc);
  }
  std::sort(out.begin(), out.end());
  return out;
}

constexpr std::array<PatternKind, 4> kPatterns{
    PatternKind::FocalSmall, PatternKind::FocalMedium, PatternKind::FocalLarge,
    PatternKind::Diffuse};
constexpr std::array<BaselineKind, 2> kBaselines{
    BaselineKind::InferiorNasalDefect, BaselineKind::SuperiorArcuate};

double pinned_rate(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::SlowProgression: return kProgressionRates[0];
    case ScenarioKind::MediumProgression: return kProgressionRates[1];
    case ScenarioKind::FastProgression: return kProgressionRates[2];
    default: return 0.0;
  }
}

std::string format_rate(double rate) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", rate);
  return buf;
}

// Type-7 sample quantile of sorted data.
double quantile_sorted(const std::vector<double>& v, double p) {
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::string_view setting_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::AgeDecline: return "age";
    case ScenarioKind::SlowProgression: return "slow";
    case ScenarioKind::MediumProgression: return "medium";
    case ScenarioKind::FastProgression: return "fast";
    case ScenarioKind::Cataract: return "cataract";
  }
  return "?";
}

std::optional<ScenarioKind> parse_setting(std::string_view name) {
  for (ScenarioKind k : kAllScenarios) {
    if (setting_name(k) == name) return k;
  }
  return std::nullopt;
}

bool is_progressing(ScenarioKind kind) {
  return kind == ScenarioKind::SlowProgression ||
         kind == ScenarioKind::MediumProgression ||
         kind == ScenarioKind::FastProgression;
}

void ScenarioSpec::validate() const {
  if (n_eyes <= 0) throw std::invalid_argument("n_eyes must be positive");
  if (n_exams < static_cast<int>(kMinExams)) {
    throw std::invalid_argument("n_exams must be at least 6");
  }
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
}

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::None: return "None";
    case PatternKind::FocalSmall: return "FocalSmall";
    case PatternKind::FocalMedium: return "FocalMedium";
    case PatternKind::FocalLarge: return "FocalLarge";
    case PatternKind::Diffuse: return "Diffuse";
  }
  return "?";
}

std::string_view to_string(BaselineKind kind) {
  return kind == BaselineKind::InferiorNasalDefect ? "InferiorNasalDefect"
                                                   : "SuperiorArcuate";
}

DecayPattern make_pattern(BaselineKind baseline, PatternKind kind, double rate) {
  DecayPattern p;
  p.kind = kind;
  p.rate = rate;
  const bool nasal = baseline == BaselineKind::InferiorNasalDefect;
  switch (kind) {
    case PatternKind::None:
      p.rate = 0.0;
      break;
    case PatternKind::FocalSmall:
      p.affected = resolve(nasal ? kNasalScotoma : kParacentral);
      break;
    case PatternKind::FocalMedium:
      p.affected = resolve(nasal ? kNasalStep : kArcuateToFixation);
      break;
    case PatternKind::FocalLarge:
      p.affected = resolve(kPairedArcuates);
      break;
    case PatternKind::Diffuse:
      for (std::size_t i = 0; i < kNumLocations; ++i) p.affected.push_back(i);
      break;
  }
  return p;
}

BaselineField baseline_field(BaselineKind name) {
  BaselineField b;
  b.name = name;
  b.sensitivities = hill_of_vision().mean_at_60;
  const auto& defects = name == BaselineKind::InferiorNasalDefect
                            ? inferior_nasal_defect()
                            : superior_arcuate();
  for (const Depth& d : defects) {
    const auto loc = grid().find_location(d.x, d.y);
    if (!loc) throw std::logic_error("baseline coordinate not on 24-2 grid");
    b.sensitivities[*loc] -= d.db;
  }
  return b;
}

double NoiseModel::sd(double sensitivity) const {
  if (kind == Kind::Homoscedastic) return constant_sd;
  return std::min(std::exp(log_slope * sensitivity + log_intercept), max_sd);
}

VisualField true_trajectory(const BaselineField& baseline,
                            const DecayPattern& pattern, const ScenarioSpec& spec,
                            int exam_index, const NormativeModel& norm) {
  if (exam_index < 0 || exam_index >= spec.n_exams) {
    throw std::out_of_range("exam index out of range");
  }
  const double t = spec.exam_time(exam_index);
  FieldValues s{};
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    s[i] = baseline.sensitivities[i] + spec.age_slope * t;
  }
  for (std::size_t i : pattern.affected) s[i] += pattern.rate * t;
  return make_field(s, t, spec.baseline_age + t, norm);
}

VisualField add_noise(const VisualField& field, const NoiseModel& model, Rng& rng,
                      const NormativeModel& norm) {
  FieldValues s{};
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    const double sd = model.sd(field.sensitivities[i]);
    s[i] = field.sensitivities[i] + sd * rng.normal();
  }
  return make_field(s, field.exam_time, field.age_at_exam, norm);
}

EyeScenario eye_scenario(const ScenarioSpec& spec, int eye_index) {
  const auto e = static_cast<std::size_t>(eye_index);
  if (spec.kind == ScenarioKind::AgeDecline) {
    const BaselineKind b = kBaselines[e % kBaselines.size()];
    return {b, make_pattern(b, PatternKind::None, 0.0)};
  }
  if (spec.kind == ScenarioKind::Cataract) {
    const BaselineKind b = kBaselines[e % kBaselines.size()];
    return {b, make_pattern(b, PatternKind::Diffuse, kCataractRate)};
  }
  const std::size_t combos = kBaselines.size() * kPatterns.size();
  if (spec.full_factorial) {
    const std::size_t c = e % (combos * kProgressionRates.size());
    const BaselineKind b = kBaselines[c / (kPatterns.size() * kProgressionRates.size())];
    const PatternKind p = kPatterns[(c / kProgressionRates.size()) % kPatterns.size()];
    return {b, make_pattern(b, p, kProgressionRates[c % kProgressionRates.size()])};
  }
  const std::size_t c = e % combos;
  const BaselineKind b = kBaselines[c / kPatterns.size()];
  return {b, make_pattern(b, kPatterns[c % kPatterns.size()], pinned_rate(spec.kind))};
}

Rng eye_stream(std::uint64_t seed, ScenarioKind kind, int eye_index) {
  return Rng::stream(seed, {static_cast<std::uint64_t>(kind) + 1,
                            static_cast<std::uint64_t>(eye_index)});
}

EyeSeries simulate_eye(const ScenarioSpec& spec, int eye_index,
                       std::uint64_t seed, const NoiseModel& noise,
                       const NormativeModel& norm) {
  const EyeScenario sc = eye_scenario(spec, eye_index);
  const BaselineField base = baseline_field(sc.baseline);
  Rng rng = eye_stream(seed, spec.kind, eye_index);

  EyeSeries eye;
  char id[64];
  std::snprintf(id, sizeof id, "%s-%04d", std::string(setting_name(spec.kind)).c_str(),
                eye_index);
  eye.eye_id = id;
  GroundTruth truth;
  truth.label = is_progressing(spec.kind) ? Truth::Progressing : Truth::Nonprogressing;
  truth.setting = std::string(setting_name(spec.kind));
  truth.pattern = std::string(to_string(sc.baseline)) + "/" +
                  std::string(to_string(sc.pattern.kind)) + "/" +
                  format_rate(sc.pattern.rate);
  eye.truth = std::move(truth);
  eye.exams.reserve(static_cast<std::size_t>(spec.n_exams));
  for (int k = 0; k < spec.n_exams; ++k) {
    eye.exams.push_back(
        add_noise(true_trajectory(base, sc.pattern, spec, k, norm), noise, rng, norm));
  }
  return eye;
}

std::vector<EyeSeries> simulate_cohort(const ScenarioSpec& spec,
                                       std::uint64_t seed,
                                       const NoiseModel& noise,
                                       const NormativeModel& norm) {
  spec.validate();
  std::vector<EyeSeries> cohort;
  cohort.reserve(static_cast<std::size_t>(spec.n_eyes));
  for (int e = 0; e < spec.n_eyes; ++e) {
    cohort.push_back(simulate_eye(spec, e, seed, noise, norm));
  }
  return cohort;
}

NormativeModel derive_normative_model(const NoiseModel& noise, std::uint64_t seed,
                                      int n_exams) {
  NormativeModel model = hill_of_vision();
  ScenarioSpec spec;
  spec.age_slope = model.age_slope;
  const int eyes = (n_exams + spec.n_exams - 1) / spec.n_exams;

  std::array<std::vector<double>, kNumLocations> td;
  for (auto& v : td) v.reserve(static_cast<std::size_t>(n_exams));
  BaselineField healthy;
  healthy.sensitivities = model.mean_at_60;
  const DecayPattern none;
  int produced = 0;
  for (int e = 0; e < eyes && produced < n_exams; ++e) {
    Rng rng = Rng::stream(seed, {0, static_cast<std::uint64_t>(e)});
    for (int k = 0; k < spec.n_exams && produced < n_exams; ++k, ++produced) {
      const VisualField f =
          add_noise(true_trajectory(healthy, none, spec, k, model), noise, rng, model);
      for (std::size_t i = 0; i < kNumLocations; ++i) td[i].push_back(f.td[i]);
    }
  }
  for (std::size_t i = 0; i < kNumLocations; ++i) {
    std::sort(td[i].begin(), td[i].end());
    model.cutoffs[i] = QuantileCutoffs{quantile_sorted(td[i], 0.05),
                                       quantile_sorted(td[i], 0.02),
                                       quantile_sorted(td[i], 0.01),
                                       quantile_sorted(td[i], 0.005)};
  }
  model.validate();
  return model;
}

const NormativeModel& standard_normative() {
  static const NormativeModel model = derive_normative_model(NoiseModel{});
  return model;
}

}  // namespace vfd
