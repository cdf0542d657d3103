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

#include "sir/mapping/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "sir/common/error.hpp"
#include "sir/common/random.hpp"

namespace sir::mapping {

namespace {

Circle diametric(Point a, Point b) {
  const Point c{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return {c, std::max(distance(c, a), distance(c, b))};
}

Circle circumscribed(Point a, Point b, Point c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  const double scale = std::max({std::abs(bx), std::abs(by), std::abs(cx), std::abs(cy), 1e-300});
  if (std::abs(d) <= 1e-14 * scale * scale) {
    // Collinear: the farthest pair spans the circle.
    Circle best = diametric(a, b);
    for (const Circle& cand : {diametric(a, c), diametric(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const Point center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
  return {center, std::max({distance(center, a), distance(center, b), distance(center, c)})};
}

bool inside(const Circle& c, Point p) { return distance(c.center, p) <= c.radius * (1.0 + 1e-12) + 1e-15; }

}  // namespace

Circle enclosing_circle(std::span<const Point> points) {
  require(!points.empty(), "enclosing_circle: no points");
  std::vector<Point> pts(points.begin(), points.end());
  // Canonical order first, then a fixed shuffle.
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
  Rng rng = make_rng(0x5eed, pts.size());
  std::shuffle(pts.begin(), pts.end(), rng);

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(c, pts[j])) continue;
      c = diametric(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (inside(c, pts[k])) continue;
        c = circumscribed(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

CoverageCircle estimate_coverage(std::span<const Point> occupied_locations, std::size_t channel) {
  if (occupied_locations.size() < 2)
    throw InvalidArgument("estimate_coverage: at least 2 occupied locations are needed to place a circle");
  return {enclosing_circle(occupied_locations), channel};
}

double CoverageReport::mean_radius_error_pct() const {
  if (matches.empty()) return 0.0;
  double s = 0.0;
  for (const auto& m : matches) s += m.radius_error_pct;
  return s / static_cast<double>(matches.size());
}

CoverageReport coverage_error(std::span<const CoverageCircle> estimates, std::span<const rf::PuNode> pus) {
  require(!estimates.empty(), "coverage_error: no estimates");
  struct Pair {
    double dist;
    std::size_t e, p;
  };
  std::vector<Pair> pairs;
  for (std::size_t e = 0; e < estimates.size(); ++e)
    for (std::size_t p = 0; p < pus.size(); ++p)
      if (pus[p].channel == estimates[e].channel)
        pairs.push_back({distance(estimates[e].circle.center, pus[p].position), e, p});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.dist < b.dist; });
  std::vector<bool> e_used(estimates.size(), false), p_used(pus.size(), false);
  CoverageReport report;
  for (const auto& pr : pairs) {
    if (e_used[pr.e] || p_used[pr.p]) continue;
    e_used[pr.e] = p_used[pr.p] = true;
    const double r = pus[pr.p].coverage_radius;
    report.matches.push_back({pr.p, pr.e, 100.0 * std::abs(estimates[pr.e].circle.radius - r) / r, pr.dist});
  }
  std::sort(report.matches.begin(), report.matches.end(),
            [](const CoverageMatch& a, const CoverageMatch& b) { return a.pu < b.pu; });
  for (std::size_t e = 0; e < estimates.size(); ++e)
    if (!e_used[e]) report.unmatched_estimates.push_back(e);
  for (std::size_t p = 0; p < pus.size(); ++p)
    if (!p_used[p]) report.unmatched_pus.push_back(p);
  return report;
}

}  // namespace sir::mapping
