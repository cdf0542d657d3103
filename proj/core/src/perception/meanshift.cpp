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

#include "sir/perception/meanshift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sir/common/error.hpp"
#include "sir/common/stats.hpp"

namespace sir::perception {

double silverman_bandwidth(std::span<const double> samples) {
  require(!samples.empty(), "silverman_bandwidth: no samples");
  const double sd = std::sqrt(variance_unbiased(samples));
  return 1.06 * sd * std::pow(static_cast<double>(samples.size()), -0.2);
}

MeanShiftResult fit_meanshift(std::span<const double> samples, double bandwidth) {
  require(bandwidth > 0.0, "fit_meanshift: bandwidth must be > 0");
  MeanShiftResult out;
  out.bandwidth = bandwidth;
  if (samples.empty()) return out;

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  // Kernel weights beyond 7 bandwidths are below exp(-24.5) and are skipped.
  const double reach = 7.0 * bandwidth;
  const double inv2h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  const double tol = 1e-7 * bandwidth;

  auto ascend = [&](double x) {
    for (int it = 0; it < 1000; ++it) {
      const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
      const auto hi = std::upper_bound(lo, sorted.end(), x + reach);
      double wsum = 0.0, xsum = 0.0;
      for (auto p = lo; p != hi; ++p) {
        const double d = *p - x;
        const double w = std::exp(-d * d * inv2h2);
        wsum += w;
        xsum += w * *p;
      }
      if (wsum <= 0.0) break;
      const double next = xsum / wsum;
      const double step = std::abs(next - x);
      x = next;
      if (step < tol) break;
    }
    return x;
  };

  // In one dimension the Gaussian mean-shift map is nondecreasing in its
  // argument, so limits are ordered like the sorted starts. When both ends of a
  // run of starts reach the same limit, every start in between does too.
  std::vector<double> limit(sorted.size());
  const double same = 1e-4 * bandwidth;
  struct Span {
    std::size_t lo, hi;
  };
  limit.front() = ascend(sorted.front());
  limit.back() = ascend(sorted.back());
  std::vector<Span> stack{{0, sorted.size() - 1}};
  while (!stack.empty()) {
    const Span sp = stack.back();
    stack.pop_back();
    if (sp.hi - sp.lo <= 1) continue;
    if (std::abs(limit[sp.hi] - limit[sp.lo]) < same) {
      for (std::size_t r = sp.lo + 1; r < sp.hi; ++r) limit[r] = limit[sp.lo];
      continue;
    }
    const std::size_t mid = sp.lo + (sp.hi - sp.lo) / 2;
    limit[mid] = ascend(sorted[mid]);
    stack.push_back({sp.lo, mid});
    stack.push_back({mid, sp.hi});
  }
  std::vector<double> converged(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto r = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), samples[i]) - sorted.begin());
    converged[i] = limit[r];
  }

  // Merge converged points closer than bandwidth/2 (chains of close points merge).
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return converged[a] < converged[b]; });
  out.assignments.assign(samples.size(), 0);
  double group_sum = converged[order[0]];
  std::size_t group_n = 1;
  out.assignments[order[0]] = 0;
  for (std::size_t r = 1; r < order.size(); ++r) {
    const std::size_t i = order[r];
    if (converged[i] - converged[order[r - 1]] >= 0.5 * bandwidth) {
      out.modes.push_back(group_sum / static_cast<double>(group_n));
      group_sum = 0.0;
      group_n = 0;
    }
    group_sum += converged[i];
    ++group_n;
    out.assignments[i] = out.modes.size();
  }
  out.modes.push_back(group_sum / static_cast<double>(group_n));
  return out;
}

}  // namespace sir::perception
