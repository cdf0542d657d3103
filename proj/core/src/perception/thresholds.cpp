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

#include "sir/perception/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include "sir/common/error.hpp"
#include "sir/common/stats.hpp"

namespace sir::perception {

double np_threshold(double pfa, double noise_var, std::size_t n) {
  require(pfa > 0.0 && pfa < 1.0, "np_threshold: pfa must lie in (0, 1)");
  require(noise_var > 0.0 && n >= 1, "np_threshold: noise_var > 0 and n >= 1 required");
  return noise_var * (1.0 + inverse_q(pfa) / std::sqrt(static_cast<double>(n)));
}

std::vector<double> map_thresholds(std::span<const double> powers, std::span<const double> priors, double noise_var,
                                   std::size_t n, std::optional<double> common_variance) {
  require(powers.size() == priors.size() && !powers.empty(), "map_thresholds: powers and priors must match");
  require(noise_var > 0.0 && n >= 1, "map_thresholds: noise_var > 0 and n >= 1 required");
  for (std::size_t i = 1; i < powers.size(); ++i)
    require(powers[i] > powers[i - 1], "map_thresholds: powers must be ascending and distinct");

  const auto mean_of = [&](std::size_t i) { return noise_var + powers[i]; };
  const auto var_of = [&](std::size_t i) {
    return common_variance ? *common_variance : mean_of(i) * mean_of(i) / static_cast<double>(n);
  };
  std::vector<double> thresholds;
  for (std::size_t i = 0; i + 1 < powers.size(); ++i) {
    const double m0 = mean_of(i), m1 = mean_of(i + 1);
    const double v0 = var_of(i), v1 = var_of(i + 1);
    const double lp0 = std::log(priors[i]), lp1 = std::log(priors[i + 1]);
    // f > 0 where hypothesis i is the more probable one.
    const auto f = [&](double x) {
      return (lp0 - 0.5 * std::log(v0) - (x - m0) * (x - m0) / (2 * v0)) -
             (lp1 - 0.5 * std::log(v1) - (x - m1) * (x - m1) / (2 * v1));
    };
    const double a = 1.0 / (2 * v1) - 1.0 / (2 * v0);
    const double b = m0 / v0 - m1 / v1;
    const double c = m1 * m1 / (2 * v1) - m0 * m0 / (2 * v0) + lp0 - lp1 - 0.5 * std::log(v0) + 0.5 * std::log(v1);
    double root = 0.5 * (m0 + m1);
    if (std::abs(a) < 1e-14 * (std::abs(b) + 1.0)) {
      root = -c / b;
    } else {
      const double disc = b * b - 4 * a * c;
      if (disc >= 0) {
        const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        const double r1 = q / a, r2 = c / q;
        root = std::abs(r1 - 0.5 * (m0 + m1)) < std::abs(r2 - 0.5 * (m0 + m1)) ? r1 : r2;
      }
    }
    // Bracket the root (priors can push it outside [m0, m1]), then bisect.
    double lo = m0, hi = m1;
    const double width = m1 - m0;
    for (int it = 0; it < 64 && f(lo) <= 0; ++it) lo -= width;
    for (int it = 0; it < 64 && f(hi) >= 0; ++it) hi += width;
    if (!(f(lo) > 0 && f(hi) < 0)) throw NumericalError("map_thresholds: no decision boundary between adjacent levels");
    if (root > lo && root < hi) {
      const double span = 1e-6 * width;
      if (f(root - span) > 0 && f(root + span) < 0) {
        lo = root - span;
        hi = root + span;
      }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0 ? lo : hi) = mid;
    }
    root = 0.5 * (lo + hi);
    thresholds.push_back(root);
  }
  return thresholds;
}

std::size_t classify_by_thresholds(std::span<const double> thresholds, double energy) {
  std::size_t level = 0;
  for (double t : thresholds)
    if (energy > t) ++level;
  return level;
}

}  // namespace sir::perception
