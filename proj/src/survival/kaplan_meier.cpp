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

#include "vfd/survival.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vfd {
namespace {

std::string num(double v, const char* fmt = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

double KMCurve::survival_at(double t) const {
  double s = 1.0;
  for (const KMRow& r : rows) {
    if (r.time > t) break;
    s = r.survival;
  }
  return s;
}

KMCurve km_estimate(std::span<const SurvivalInput> inputs) {
  if (inputs.empty()) throw std::invalid_argument("km_estimate: no subjects");
  struct Counts {
    std::size_t events = 0;
    std::size_t censored = 0;
  };
  std::map<double, Counts> by_time;
  for (const SurvivalInput& in : inputs) {
    if (!(in.time > 0.0)) throw std::invalid_argument("km_estimate: time must be > 0");
    Counts& c = by_time[in.time];
    (in.event ? c.events : c.censored)++;
  }

  KMCurve curve;
  std::size_t at_risk = inputs.size();
  curve.rows.push_back(KMRow{0.0, at_risk, 0, 0, 1.0, 1.0, 1.0});
  double s = 1.0;
  double greenwood = 0.0;
  for (const auto& [time, c] : by_time) {
    KMRow row;
    row.time = time;
    row.at_risk = at_risk;
    row.events = c.events;
    row.censored = c.censored;
    if (c.events > 0) {
      const auto n = static_cast<double>(at_risk);
      const auto d = static_cast<double>(c.events);
      s *= (n - d) / n;
      if (c.events < at_risk) greenwood += d / (n * (n - d));
    }
    row.survival = s;
    if (s <= 0.0) {
      row.ci_low = row.ci_high = 0.0;
    } else {
      const double half = kKmZ95 * std::sqrt(greenwood);
      row.ci_low = std::clamp(s * std::exp(-half), 0.0, 1.0);
      row.ci_high = std::clamp(s * std::exp(half), 0.0, 1.0);
    }
    curve.rows.push_back(row);
    at_risk -= c.events + c.censored;
  }
  return curve;
}

void write_km_csv(std::ostream& os, const KMCurve& curve) {
  os << "time,at_risk,events,censored,S,ci_low,ci_high\n";
  for (const KMRow& r : curve.rows) {
    os << num(r.time, "%.17g") << ',' << r.at_risk << ',' << r.events << ','
       << r.censored << ',' << num(r.survival, "%.17g") << ','
       << num(r.ci_low, "%.17g") << ',' << num(r.ci_high, "%.17g") << '\n';
  }
}

std::string km_svg(const std::vector<std::pair<std::string, KMCurve>>& curves,
                   const std::string& title) {
  constexpr double kW = 720, kH = 440, kLeft = 60, kRight = 170, kTop = 40, kBottom = 50;
  constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                               "#9467bd", "#ff7f0e", "#8c564b"};
  double t_max = 0.0;
  for (const auto& [label, c] : curves) {
    if (!c.rows.empty()) t_max = std::max(t_max, c.rows.back().time);
  }
  if (t_max <= 0.0) t_max = 1.0;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double t) { return kLeft + pw * t / t_max; };
  auto py = [&](double s) { return kTop + ph * (1.0 - s); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
     << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft + pw
     << "\" y2=\"" << py(0) << "\"/>\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft
     << "\" y2=\"" << py(1) << "\"/>\n</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double s = i / 5.0;
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(s) + 4)
       << "\" text-anchor=\"end\">" << num(s, "%.1f") << "</text>\n";
    const double t = t_max * i / 5.0;
    os << "<text x=\"" << num(px(t)) << "\" y=\"" << py(0) + 16
       << "\" text-anchor=\"middle\">" << num(t, "%.1f") << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10
     << "\" text-anchor=\"middle\">Follow-up (years)</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 16 "
     << kTop + ph / 2 << ")\" text-anchor=\"middle\">Survival probability</text>\n";
  os << "</g>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& [label, curve] = curves[c];
    const char* color = kColors[c % kColors.size()];
    // Band polygon: upper edge forward, lower edge backward, both as steps.
    std::ostringstream upper, lower, line;
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
      const KMRow& r = curve.rows[i];
      const double t_next = i + 1 < curve.rows.size() ? curve.rows[i + 1].time : r.time;
      upper << num(px(r.time)) << ',' << num(py(r.ci_high)) << ' ' << num(px(t_next))
            << ',' << num(py(r.ci_high)) << ' ';
      line << num(px(r.time)) << ',' << num(py(r.survival)) << ' ' << num(px(t_next))
           << ',' << num(py(r.survival)) << ' ';
    }
    for (std::size_t i = curve.rows.size(); i-- > 0;) {
      const KMRow& r = curve.rows[i];
      const double t_next = i + 1 < curve.rows.size() ? curve.rows[i + 1].time : r.time;
      lower << num(px(t_next)) << ',' << num(py(r.ci_low)) << ' ' << num(px(r.time))
            << ',' << num(py(r.ci_low)) << ' ';
    }
    os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.12\" stroke=\"none\" points=\""
       << upper.str() << lower.str() << "\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\""
       << line.str() << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(c);
    os << "<line x1=\"" << kLeft + pw + 15 << "\" y1=\"" << ly << "\" x2=\""
       << kLeft + pw + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw + 46 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace vfd
