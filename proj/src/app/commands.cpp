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

#include "vfd/commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "vfd/cohort_io.hpp"
#include "vfd/neural/checkpoint.hpp"
#include "vfd/survival.hpp"

namespace vfd::app {
namespace {

using nlohmann::json;

std::ofstream open_out(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  return os;
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  if (!os) throw DataError("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw DataError("bad number: " + s);
  return v;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::vector<EyeSeries> load_setting(const RunLayout& layout, ScenarioKind kind) {
  const fs::path p = layout.cohort(kind);
  if (!fs::exists(p)) throw DataError("missing cohort " + p.string() + " (run simulate)");
  return load_cohort(p.string());
}

json grid_table() {
  json rows = json::array();
  const Grid24_2& g = grid();
  for (int idx = 1; idx <= static_cast<int>(kNumGridPoints); ++idx) {
    const GridPoint p = g.at(idx);
    const auto loc = g.location_of(idx);
    rows.push_back({{"grid_index", idx},
                    {"x", p.x_deg},
                    {"y", p.y_deg},
                    {"location", loc ? json(*loc + 1) : json(nullptr)},
                    {"blind_spot", g.is_blind_spot(idx)}});
  }
  return rows;
}

json scotoma_table() {
  json rows = json::array();
  for (BaselineKind b : {BaselineKind::InferiorNasalDefect, BaselineKind::SuperiorArcuate}) {
    for (PatternKind p : {PatternKind::FocalSmall, PatternKind::FocalMedium,
                          PatternKind::FocalLarge, PatternKind::Diffuse}) {
      json idx = json::array();
      for (std::size_t loc : make_pattern(b, p, 0.0).affected) {
        idx.push_back(grid().grid_index_of(loc));
      }
      rows.push_back({{"baseline", to_string(b)}, {"pattern", to_string(p)},
                      {"grid_indices", idx}});
    }
  }
  return rows;
}

json baseline_table() {
  json out = json::object();
  for (BaselineKind b : {BaselineKind::InferiorNasalDefect, BaselineKind::SuperiorArcuate}) {
    const BaselineField f = baseline_field(b);
    out[std::string(to_string(b))] = std::vector<double>(f.sensitivities.begin(),
                                                         f.sensitivities.end());
  }
  return out;
}

void write_verdicts(const fs::path& path, const std::vector<VerdictRow>& rows) {
  auto os = open_out(path);
  os << "eye_id,scenario,method,pipeline,progressed,conversion_time,last_followup,trace\n";
  for (const VerdictRow& r : rows) {
    os << r.eye_id << ',' << r.setting << ',' << to_string(r.method) << ','
       << to_string(r.pipeline) << ',' << (r.progressed ? 1 : 0) << ','
       << (r.conversion_time ? format_number(*r.conversion_time) : "NA") << ','
       << format_number(r.last_followup) << ',' << r.trace << '\n';
  }
}

void write_summary(const fs::path& path, const std::vector<SummaryRow>& rows) {
  auto os = open_out(path);
  os << "setting,total,progressed,percentage,mean_conversion_time\n";
  for (const SummaryRow& r : rows) {
    const CohortSummary& s = r.summary;
    os << r.setting << ',' << s.total << ',' << s.progressed << ','
       << format_number(s.percentage) << ','
       << (s.mean_conversion_time ? format_number(*s.mean_conversion_time) : "NA")
       << '\n';
  }
}

}  // namespace

fs::path RunLayout::cohort(ScenarioKind kind) const {
  return root / "cohorts" / (std::string(setting_name(kind)) + ".csv");
}
fs::path RunLayout::checkpoint(const nn::Variant& v) const {
  return root / "checkpoints" / (file_tag(v) + ".ckpt");
}
fs::path RunLayout::loss_log(const nn::Variant& v) const {
  return root / "checkpoints" / (file_tag(v) + "_loss.csv");
}
fs::path RunLayout::denoised(const nn::Variant& v, ScenarioKind kind) const {
  return root / "denoised" / file_tag(v) / (std::string(setting_name(kind)) + ".csv");
}
fs::path RunLayout::verdicts(Pipeline p, Method m) const {
  return root / "verdicts" / (file_tag(p) + "_" + std::string(to_string(m)) + ".csv");
}
fs::path RunLayout::summary(Pipeline p, Method m) const {
  return root / "verdicts" /
         (file_tag(p) + "_" + std::string(to_string(m)) + "_summary.csv");
}

std::string file_tag(const nn::Variant& v) {
  return std::string(v.kind == nn::ModelKind::MAE ? "mae" : "vae") +
         (v.with_pvalues ? "_p" : "");
}

std::string file_tag(Pipeline p) {
  std::string s(to_string(p));
  if (!s.empty() && s.back() == 'p') s.replace(s.size() - 2, 1, "_");
  return s;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const RunLayout layout{cfg.output};
  const NormativeModel norm = derive_normative_model(cfg.noise);
  {
    auto os = open_out(layout.normative());
    write_normative(os, norm);
  }

  json settings = json::array();
  for (ScenarioKind kind : cfg.simulation.settings) {
    const ScenarioSpec spec = cfg.simulation.spec(kind);
    const auto cohort = simulate_cohort(spec, cfg.seed, cfg.noise, norm);
    {
      auto os = open_out(layout.cohort(kind));
      write_cohort(os, cohort);
    }
    std::map<std::string, int> combos;
    for (const EyeSeries& e : cohort) ++combos[e.truth->pattern];
    settings.push_back({{"setting", setting_name(kind)},
                        {"file", fs::relative(layout.cohort(kind), layout.root).string()},
                        {"eyes", spec.n_eyes},
                        {"exams", spec.n_exams},
                        {"duration", spec.duration},
                        {"progressing", is_progressing(kind)},
                        {"eyes_per_scenario", combos}});
    log << "simulate: " << setting_name(kind) << " " << cohort.size() << " eyes\n";
  }
  const json manifest = {{"seed", cfg.seed},
                         {"normative_seed", kNormativeSeed},
                         {"normative_exams", kNormativeExams},
                         {"settings", settings},
                         {"grid", grid_table()},
                         {"scotomas", scotoma_table()},
                         {"baselines", baseline_table()}};
  write_text(layout.manifest(), manifest.dump(2) + "\n");
  write_text(layout.config(), to_json_text(cfg));
}

nn::CheckpointRecord cmd_train(const RunConfig& cfg, const nn::Variant& variant,
                               std::ostream& log) {
  const RunLayout layout{cfg.output};
  std::vector<EyeSeries> pooled;
  for (ScenarioKind kind : cfg.simulation.settings) {
    auto cohort = load_setting(layout, kind);
    pooled.insert(pooled.end(), std::make_move_iterator(cohort.begin()),
                  std::make_move_iterator(cohort.end()));
  }
  const nn::TrainConfig tc = cfg.train_config();
  const nn::EyeSplit split = nn::split_by_eye(pooled.size(), tc);
  const auto train = nn::gather_exams(pooled, split.train);
  const auto val = nn::gather_exams(pooled, split.val);
  log << "train " << variant.tag() << ": " << train.size() << " train / " << val.size()
      << " val exams\n";

  auto loss_os = open_out(layout.loss_log(variant));
  loss_os << "epoch,lr,train_loss,train_recon,train_kl,val_loss,val_recon,val_kl\n";
  const nn::FitResult r = nn::fit(variant, train, val, tc, [&](const nn::EpochLog& e) {
    loss_os << e.epoch << ',' << format_number(e.lr) << ',' << format_number(e.train_loss)
            << ',' << format_number(e.train_recon) << ',' << format_number(e.train_kl)
            << ',' << format_number(e.val_loss) << ',' << format_number(e.val_recon) << ','
            << format_number(e.val_kl) << '\n';
  });
  nn::save_checkpoint(layout.checkpoint(variant).string(), r.best);
  log << "train " << variant.tag() << ": best epoch " << r.best.epoch << " val_loss "
      << r.best.val_loss << "\n";
  return r.best;
}

namespace {

nn::Autoencoder load_model(const RunLayout& layout, const nn::Variant& variant) {
  const fs::path p = layout.checkpoint(variant);
  if (!fs::exists(p)) {
    throw DataError("missing checkpoint " + p.string() + " (run train --variant " +
                    variant.tag() + ")");
  }
  nn::CheckpointRecord ckpt = nn::load_checkpoint(p.string());
  if (!(ckpt.params.variant == variant)) {
    throw DataError("checkpoint " + p.string() + " holds variant " +
                    ckpt.params.variant.tag() + ", expected " + variant.tag());
  }
  return std::move(ckpt.params);
}

}  // namespace

void cmd_denoise(const RunConfig& cfg, const nn::Variant& variant, std::ostream& log) {
  const RunLayout layout{cfg.output};
  const NormativeModel norm = load_normative(layout.normative().string());
  const nn::Autoencoder model = load_model(layout, variant);
  for (ScenarioKind kind : cfg.simulation.settings) {
    std::vector<EyeSeries> out;
    for (const EyeSeries& e : load_setting(layout, kind)) {
      out.push_back(denoise_series(model, e, norm));
    }
    auto os = open_out(layout.denoised(variant, kind));
    write_cohort(os, out);
    log << "denoise " << variant.tag() << ": " << setting_name(kind) << "\n";
  }
}

void cmd_analyze(const RunConfig& cfg, const std::vector<Pipeline>& pipelines,
                 const std::vector<Method>& methods, std::ostream& log) {
  const RunLayout layout{cfg.output};
  const NormativeModel norm = load_normative(layout.normative().string());
  std::map<ScenarioKind, std::vector<EyeSeries>> cohorts;
  for (ScenarioKind kind : cfg.simulation.settings) cohorts[kind] = load_setting(layout, kind);

  for (Pipeline pipeline : pipelines) {
    std::optional<nn::Autoencoder> model;
    if (const auto v = pipeline_variant(pipeline)) model = load_model(layout, *v);

    std::map<Method, std::vector<VerdictRow>> rows;
    std::map<Method, std::vector<SummaryRow>> summaries;
    std::map<Method, std::vector<ProgressionVerdict>> pooled;
    for (ScenarioKind kind : cfg.simulation.settings) {
      std::map<Method, std::vector<ProgressionVerdict>> per_setting;
      for (const EyeSeries& raw : cohorts[kind]) {
        const EyeSeries series = model ? denoise_series(*model, raw, norm) : raw;
        for (Method m : methods) {
          ProgressionVerdict v = progressive_harness(series, m, norm, cfg.detection);
          VerdictRow row;
          row.eye_id = v.eye_id;
          row.setting = std::string(setting_name(kind));
          row.method = m;
          row.pipeline = pipeline;
          row.progressed = v.progressed;
          row.conversion_time = v.conversion_time;
          row.last_followup = series.exams.back().exam_time;
          for (bool b : v.trace) row.trace.push_back(b ? '1' : '0');
          rows[m].push_back(std::move(row));
          per_setting[m].push_back(v);
          pooled[m].push_back(std::move(v));
        }
      }
      for (Method m : methods) {
        summaries[m].push_back({std::string(setting_name(kind)), cohort_summary(per_setting[m])});
      }
    }
    for (Method m : methods) {
      summaries[m].push_back({"all", cohort_summary(pooled[m])});
      write_verdicts(layout.verdicts(pipeline, m), rows[m]);
      write_summary(layout.summary(pipeline, m), summaries[m]);
      log << "analyze " << to_string(pipeline) << "/" << to_string(m) << ":";
      for (const SummaryRow& s : summaries[m]) {
        log << ' ' << s.setting << '=' << fixed2(s.summary.percentage) << '%';
      }
      log << "\n";
    }
  }
}

std::vector<VerdictRow> read_verdicts(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read " + path.string());
  std::string line;
  std::getline(is, line);
  std::vector<VerdictRow> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 8) throw DataError("verdict file: bad row in " + path.string());
    VerdictRow r;
    r.eye_id = c[0];
    r.setting = c[1];
    const auto m = parse_method(c[2]);
    const auto p = parse_pipeline(c[3]);
    if (!m || !p) throw DataError("verdict file: bad method/pipeline in " + path.string());
    r.method = *m;
    r.pipeline = *p;
    r.progressed = c[4] == "1";
    if (c[5] != "NA") r.conversion_time = to_double(c[5]);
    r.last_followup = to_double(c[6]);
    r.trace = c[7];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SummaryRow> read_summary(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read " + path.string());
  std::string line;
  std::getline(is, line);
  std::vector<SummaryRow> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 5) throw DataError("summary file: bad row in " + path.string());
    SummaryRow r;
    r.setting = c[0];
    r.summary.total = static_cast<std::size_t>(std::stoull(c[1]));
    r.summary.progressed = static_cast<std::size_t>(std::stoull(c[2]));
    r.summary.percentage = to_double(c[3]);
    if (c[4] != "NA") r.summary.mean_conversion_time = to_double(c[4]);
    out.push_back(std::move(r));
  }
  return out;
}

void cmd_report(const RunConfig& cfg, std::ostream& log) {
  const RunLayout layout{cfg.output};
  const fs::path dir = layout.report_dir();
  // Row labels used in the progression tables.
  auto row_label = [](Pipeline p) -> std::string {
    switch (p) {
      case Pipeline::MAEp: return "MAE w/p";
      case Pipeline::VAEp: return "VAE w/p";
      default: return std::string(to_string(p));
    }
  };
  const std::array<Method, 3> table_order{Method::GRI, Method::MD, Method::PLR};

  std::map<std::pair<Pipeline, Method>, std::vector<SummaryRow>> summaries;
  for (Pipeline p : kAllPipelines) {
    for (Method m : kAllMethods) {
      const fs::path path = layout.summary(p, m);
      if (fs::exists(path)) {
        summaries[{p, m}] = read_summary(path);
      } else {
        log << "report: skipping missing " << path.string() << "\n";
      }
    }
  }
  auto find = [&](Pipeline p, Method m, const std::string& setting) -> const CohortSummary* {
    auto it = summaries.find({p, m});
    if (it == summaries.end()) return nullptr;
    for (const SummaryRow& r : it->second) {
      if (r.setting == setting) return &r.summary;
    }
    return nullptr;
  };

  std::ostringstream t1, md;
  t1 << "method,pipeline";
  md << "## Progression (%) by setting\n\n| Method | Pipeline |";
  for (ScenarioKind k : cfg.simulation.settings) {
    t1 << ',' << setting_name(k);
    md << ' ' << setting_name(k) << " |";
  }
  t1 << '\n';
  md << "\n|---|---|";
  for (std::size_t i = 0; i < cfg.simulation.settings.size(); ++i) md << "---:|";
  md << '\n';
  for (Method m : table_order) {
    for (Pipeline p : kAllPipelines) {
      t1 << to_string(m) << ',' << row_label(p);
      md << "| " << to_string(m) << " | " << row_label(p) << " |";
      for (ScenarioKind k : cfg.simulation.settings) {
        const CohortSummary* s = find(p, m, std::string(setting_name(k)));
        const std::string v = s ? fixed2(s->percentage) : "NA";
        t1 << ',' << v;
        md << ' ' << v << " |";
      }
      t1 << '\n';
      md << '\n';
    }
  }
  write_text(dir / "table1.csv", t1.str());

  std::ostringstream t2;
  t2 << "pipeline,PLR_pct,MD_pct,GRI_pct,PLR_conv_years,MD_conv_years,GRI_conv_years\n";
  md << "\n## All settings pooled\n\n| Pipeline | PLR % | MD % | GRI % | PLR conv (y) | "
        "MD conv (y) | GRI conv (y) |\n|---|---:|---:|---:|---:|---:|---:|\n";
  for (Pipeline p : kAllPipelines) {
    t2 << to_string(p);
    md << "| " << to_string(p) << " |";
    for (Method m : kAllMethods) {
      const CohortSummary* s = find(p, m, "all");
      const std::string v = s ? fixed2(s->percentage) : "NA";
      t2 << ',' << v;
      md << ' ' << v << " |";
    }
    for (Method m : kAllMethods) {
      const CohortSummary* s = find(p, m, "all");
      const std::string v =
          s && s->mean_conversion_time ? fixed2(*s->mean_conversion_time) : "NA";
      t2 << ',' << v;
      md << ' ' << v << " |";
    }
    t2 << '\n';
    md << '\n';
  }
  write_text(dir / "table2.csv", t2.str());
  write_text(dir / "report.md", md.str());

  for (Method m : kAllMethods) {
    std::vector<std::pair<std::string, KMCurve>> curves;
    std::ostringstream csv;
    csv << "pipeline,";
    bool header = false;
    for (Pipeline p : kAllPipelines) {
      const fs::path path = layout.verdicts(p, m);
      if (!fs::exists(path)) continue;
      std::vector<SurvivalInput> inputs;
      for (const VerdictRow& r : read_verdicts(path)) {
        inputs.push_back({r.conversion_time.value_or(r.last_followup), r.progressed});
      }
      if (inputs.empty()) continue;
      KMCurve curve = km_estimate(inputs);
      std::ostringstream one;
      write_km_csv(one, curve);
      std::istringstream lines(one.str());
      std::string line;
      std::getline(lines, line);
      if (!header) {
        csv << line << '\n';
        header = true;
      }
      while (std::getline(lines, line)) csv << to_string(p) << ',' << line << '\n';
      curves.emplace_back(std::string(to_string(p)), std::move(curve));
    }
    if (curves.empty()) continue;
    const std::string name = "km_" + std::string(to_string(m));
    write_text(dir / (name + ".csv"), csv.str());
    write_text(dir / (name + ".svg"),
               km_svg(curves, "Kaplan-Meier: freedom from progression (" +
                                  std::string(to_string(m)) + ")"));
    log << "report: " << name << " (" << curves.size() << " curves)\n";
  }
}

void run_pipeline(const RunConfig& cfg, std::ostream& log) {
  cmd_simulate(cfg, log);
  for (const nn::Variant& v : nn::kAllVariants) cmd_train(cfg, v, log);
  cmd_analyze(cfg, {kAllPipelines.begin(), kAllPipelines.end()},
              {kAllMethods.begin(), kAllMethods.end()}, log);
  cmd_report(cfg, log);
}

}  // namespace vfd::app
