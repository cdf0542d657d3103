// Copyright 2026 The sir Authors
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

#include "sir/bench/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sir/common/error.hpp"

namespace sir::bench {

namespace {

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick step: 1, 2 or 5 times a power of ten.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const BenchResult& result, const std::string& metric) {
  const auto methods = result.methods(metric);
  if (methods.empty()) throw InvalidArgument(fmt::format("render_svg: no rows for metric '{}'", metric));

  constexpr double W = 640, H = 420, left = 60, right = 150, top = 30, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& r : result.rows) {
    if (r.metric != metric) continue;
    xmin = std::min(xmin, r.sweep);
    xmax = std::max(xmax, r.sweep);
    if (r.value) {
      ymin = std::min(ymin, *r.value - r.ci95);
      ymax = std::max(ymax, *r.value + r.ci95);
    }
  }
  if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
  if (xmax - xmin < 1e-12) xmin -= 1.0, xmax += 1.0;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  const double ystep = nice_step(ymax - ymin, 5);
  ymin = std::floor(ymin / ystep) * ystep;
  ymax = std::ceil(ymax / ystep) * ystep;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::string s;
  s += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)"
                   "\n",
                   W, H, W, H);
  s += fmt::format(R"(<rect x="0" y="0" width="{}" height="{}" fill="white"/>)"
                   "\n",
                   W, H);
  s += fmt::format(R"(<text x="{:.1f}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{} {}</text>)"
                   "\n",
                   left + pw / 2, esc(std::string(experiment_name(result.experiment))), esc(metric));
  s += fmt::format(R"(<g stroke="black" fill="none"><rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}"/></g>)"
                   "\n",
                   left, top, pw, ph);
  s += R"(<g font-family="sans-serif" font-size="11" fill="black">)"
       "\n";
  for (double y = ymin; y <= ymax + 1e-9 * ystep; y += ystep)
    s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="end">{:g}</text>)"
                     "\n",
                     left - 6, sy(y) + 4, std::round(y / ystep) * ystep);
  std::vector<double> xs;
  for (const auto& r : result.rows)
    if (r.metric == metric && std::find(xs.begin(), xs.end(), r.sweep) == xs.end()) xs.push_back(r.sweep);
  std::sort(xs.begin(), xs.end());
  for (double x : xs)
    s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle">{:g}</text>)"
                     "\n",
                     sx(x), top + ph + 16, x);
  s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle">{}</text>)"
                   "\n",
                   left + pw / 2, H - 10, esc(result.sweep_label));
  s += "</g>\n";

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const char* color = kPalette[mi % kPalette.size()];
    std::vector<const ResultRow*> pts;
    for (const auto& r : result.rows)
      if (r.metric == metric && r.method == methods[mi]) pts.push_back(&r);
    std::stable_sort(pts.begin(), pts.end(), [](auto a, auto b) { return a->sweep < b->sweep; });
    s += fmt::format(R"(<g class="series" data-method="{}" stroke="{}" fill="none" stroke-width="1.5">)"
                     "\n",
                     esc(methods[mi]), color);
    std::string line;
    auto flush = [&] {
      if (!line.empty()) s += fmt::format(R"(<polyline points="{}"/>)"
                                          "\n",
                                          line);
      line.clear();
    };
    for (const ResultRow* r : pts) {
      if (!r->value) {
        flush();
        continue;
      }
      if (!line.empty()) line += ' ';
      line += fmt::format("{:.1f},{:.1f}", sx(r->sweep), sy(*r->value));
      if (r->ci95 > 0)
        s += fmt::format(R"(<line x1="{0:.1f}" y1="{1:.1f}" x2="{0:.1f}" y2="{2:.1f}" stroke-width="1"/>)"
                         "\n",
                         sx(r->sweep), sy(*r->value - r->ci95), sy(*r->value + r->ci95));
    }
    flush();
    s += "</g>\n";
    const double ly = top + 14 + 18 * static_cast<double>(mi);
    s += fmt::format(R"(<g class="legend"><line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" stroke="{}" stroke-width="2"/>)"
                     R"(<text x="{:.1f}" y="{:.1f}" font-family="sans-serif" font-size="11">{}</text></g>)"
                     "\n",
                     W - right + 10, ly, W - right + 30, ly, color, W - right + 36, ly + 4, esc(methods[mi]));
  }
  s += "</svg>\n";
  return s;
}

std::string render_map_svg(const rf::ScenarioConfig& cfg, const rf::MappingDataset& data,
                           const mapping::MappingResult& mapping) {
  std::size_t samples = 0;
  for (const auto& seq : data.sequences) samples += seq.size();
  if (samples == 0 && cfg.pus.empty() && mapping.map.circles.empty())
    throw InvalidArgument("render_map_svg: nothing to draw");

  constexpr double canvas = 480, margin = 20;
  const double scale = (canvas - 2 * margin) / std::max(cfg.area.width, cfg.area.height);
  auto px = [&](double x) { return margin + x * scale; };
  auto py = [&](double y) { return canvas - margin - y * scale; };

  std::string s;
  s += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">)"
                   "\n",
                   canvas);
  s += fmt::format(R"(<rect x="0" y="0" width="{0}" height="{0}" fill="white"/>)"
                   "\n",
                   canvas);
  s += fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="none" stroke="black"/>)"
                   "\n",
                   px(0), py(cfg.area.height), cfg.area.width * scale, cfg.area.height * scale);
  s += R"(<g class="samples" stroke="none">)"
       "\n";
  for (std::size_t su = 0; su < data.sequences.size(); ++su) {
    for (std::size_t t = 0; t < data.sequences[su].size(); ++t) {
      const std::size_t label = su < mapping.labels.size() && t < mapping.labels[su].size() ? mapping.labels[su][t] : 0;
      const auto& p = data.sequences[su][t].location;
      s += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="1.6" fill="{}"/>)"
                       "\n",
                       px(p.x), py(p.y), kPalette[label % kPalette.size()]);
    }
  }
  s += "</g>\n";
  s += R"(<g class="truth" fill="none" stroke="black" stroke-width="1.5">)"
       "\n";
  for (const auto& pu : cfg.pus)
    s += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="{:.2f}"/>)"
                     "\n",
                     px(pu.position.x), py(pu.position.y), pu.coverage_radius * scale);
  s += "</g>\n";
  s += R"(<g class="estimate" fill="none" stroke="blue" stroke-width="1.5" stroke-dasharray="6,4">)"
       "\n";
  for (const auto& c : mapping.map.circles)
    s += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="{:.2f}"/>)"
                     "\n",
                     px(c.circle.center.x), py(c.circle.center.y), c.circle.radius * scale);
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace sir::bench
