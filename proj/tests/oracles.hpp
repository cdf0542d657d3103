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

// Independent reference computations shared by the unit tests and the
// acceptance runner. Everything here is brute force on purpose.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sir/access/gp.hpp"
#include "sir/access/policies.hpp"
#include "sir/common/geometry.hpp"
#include "sir/common/stats.hpp"
#include "sir/rf/markov.hpp"

namespace oracle {

// Smallest circle through every pair and triple that contains all points.
inline sir::Circle enclosing_circle(const std::vector<sir::Point>& pts) {
  using sir::Point;
  auto covers = [&](const sir::Circle& c) {
    for (const auto& p : pts)
      if (sir::distance(c.center, p) > c.radius * (1 + 1e-10) + 1e-12) return false;
    return true;
  };
  if (pts.size() == 1) return {pts[0], 0.0};
  sir::Circle best{{0, 0}, INFINITY};
  auto consider = [&](const sir::Circle& c) {
    if (c.radius < best.radius && covers(c)) best = c;
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Point m{(pts[i].x + pts[j].x) / 2, (pts[i].y + pts[j].y) / 2};
      consider({m, sir::distance(m, pts[i])});
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const Point a = pts[i], b = pts[j], c = pts[k];
        const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        if (std::abs(d) < 1e-12) continue;
        const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
        const Point o{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                      (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
        consider({o, sir::distance(o, a)});
      }
    }
  return best;
}

// Expected reward over `horizon` slots for two single-channel subsets, either
// maximized over every decision tree or following optimal_act.
inline double tree_value(std::array<double, 2> b, int horizon, double p01, double p11, bool maximize) {
  if (horizon == 0) return 0.0;
  auto value_of = [&](std::size_t a) {
    std::array<double, 2> idle{}, busy{};
    for (std::size_t i = 0; i < 2; ++i) {
      idle[i] = i == a ? p11 : b[i] * p11 + (1 - b[i]) * p01;
      busy[i] = i == a ? p01 : b[i] * p11 + (1 - b[i]) * p01;
    }
    return b[a] * (1 + tree_value(idle, horizon - 1, p01, p11, maximize)) +
           (1 - b[a]) * tree_value(busy, horizon - 1, p01, p11, maximize);
  };
  if (maximize) return std::max(value_of(0), value_of(1));
  const sir::rf::MarkovChannelSet two({0, 1}, p01, p11, {true, true});
  return value_of(sir::access::optimal_act(std::vector<double>{b[0], b[1]}, two));
}

// Passivity subsidy that equalizes both actions at omega, by value iteration
// on a 101-point belief grid with linear interpolation and bisection on the subsidy.
inline double whittle_subsidy(double omega, double p01, double p11, double beta) {
  constexpr int grid = 101;
  auto interp = [](const std::vector<double>& f, double x) {
    const double pos = std::clamp(x, 0.0, 1.0) * (grid - 1);
    const int i = std::min(grid - 2, static_cast<int>(pos));
    const double t = pos - i;
    return f[i] * (1 - t) + f[i + 1] * t;
  };
  auto advantage = [&](double m) {
    std::vector<double> v(grid, 0.0), next(grid);
    auto passive = [&](const std::vector<double>& f, double w) { return m + beta * interp(f, w * p11 + (1 - w) * p01); };
    auto active = [&](const std::vector<double>& f, double w) {
      return w + beta * (w * interp(f, p11) + (1 - w) * interp(f, p01));
    };
    for (int it = 0; it < 1000; ++it) {
      for (int i = 0; i < grid; ++i) {
        const double w = static_cast<double>(i) / (grid - 1);
        next[i] = std::max(passive(v, w), active(v, w));
      }
      v.swap(next);
    }
    return active(v, omega) - passive(v, omega);
  };
  double lo = -1.0, hi = 2.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (advantage(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct GpMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Full GP posterior by a dense solve of (K + lambda I).
inline GpMoments gp_dense(const std::vector<Eigen::VectorXd>& xs, const Eigen::VectorXd& ys,
                          const sir::access::GpHypers& hy, const Eigen::VectorXd& x) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  auto k = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return hy.signal_var * std::exp(-0.5 * (a - b).squaredNorm() / (hy.lengthscale * hy.lengthscale));
  };
  Eigen::MatrixXd reg(n, n);
  Eigen::VectorXd kx(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kx(i) = k(xs[i], x);
    for (Eigen::Index j = 0; j < n; ++j) reg(i, j) = k(xs[i], xs[j]) + (i == j ? hy.noise : 0.0);
  }
  const auto solver = reg.partialPivLu();
  return {kx.dot(solver.solve(ys)), k(x, x) - kx.dot(solver.solve(kx))};
}

// Boundary between hypotheses l and l+1 by bisection on the log posterior ratio.
inline double map_boundary(const std::vector<double>& powers, const std::vector<double>& priors, double s2,
                           std::size_t n, std::size_t l) {
  const double m0 = s2 + powers[l], m1 = s2 + powers[l + 1];
  const double dn = static_cast<double>(n);
  auto ratio = [&](double x) {
    return std::log(priors[l + 1]) + sir::normal_log_pdf(x, m1, m1 * m1 / dn) - std::log(priors[l]) -
           sir::normal_log_pdf(x, m0, m0 * m0 / dn);
  };
  double lo = m0, hi = m1;
  const double w = m1 - m0;
  while (ratio(lo) > 0) lo -= w;
  while (ratio(hi) < 0) hi += w;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
