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

#include "sir/mapping/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sir/common/error.hpp"

namespace sir::mapping {

double state_distance(const StickyHmmFit& fit, std::size_t a, std::size_t b) {
  double worst = 0.0;
  for (std::size_t d = 0; d < fit.n_channels(); ++d) {
    const double diff = std::abs(fit.means[a][d] - fit.means[b][d]);
    const double scale = std::sqrt(0.5 * (fit.variances[a][d] + fit.variances[b][d]));
    if (diff == 0.0) continue;
    worst = std::max(worst, scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity());
  }
  return worst;
}

StickyHmmFit fuse_cluster_heads(const std::vector<StickyHmmFit>& fits, double merge_tol) {
  require(!fits.empty(), "fuse_cluster_heads: no fits");
  require(merge_tol >= 0.0, "fuse_cluster_heads: merge_tol must be >= 0");
  StickyHmmFit pool;
  std::vector<std::size_t> offset;
  for (const auto& f : fits) {
    require(f.k_active() == 0 || pool.k_active() == 0 || f.n_channels() == pool.n_channels(),
            "fuse_cluster_heads: channel count differs between fits");
    offset.push_back(pool.means.size());
    pool.means.insert(pool.means.end(), f.means.begin(), f.means.end());
    pool.variances.insert(pool.variances.end(), f.variances.begin(), f.variances.end());
    pool.counts.insert(pool.counts.end(), f.counts.begin(), f.counts.end());
    pool.diagnostics.insert(pool.diagnostics.end(), f.diagnostics.begin(), f.diagnostics.end());
  }
  const std::size_t total = pool.means.size();
  // parent[s] is the pooled state that s was folded into (itself while alive).
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<bool> alive(total, true);
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < total; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b = a + 1; b < total; ++b) {
        if (!alive[b]) continue;
        const double dist = state_distance(pool, a, b);
        if (dist < best) {
          best = dist;
          ba = a;
          bb = b;
        }
      }
    }
    if (!(best < merge_tol)) break;
    // Fold bb into ba; equal states stay bit-identical.
    const double na = pool.counts[ba], nb = pool.counts[bb];
    const double n = na + nb;
    const double fb = n > 0.0 ? nb / n : 0.5;
    const double fa = 1.0 - fb;
    for (std::size_t d = 0; d < pool.n_channels(); ++d) {
      const double ma = pool.means[ba][d], mb = pool.means[bb][d];
      const double va = pool.variances[ba][d], vb = pool.variances[bb][d];
      pool.means[ba][d] = ma + (mb - ma) * fb;
      pool.variances[ba][d] = va + (vb - va) * fb + fa * fb * (mb - ma) * (mb - ma);
    }
    pool.counts[ba] = n;
    alive[bb] = false;
    parent[bb] = ba;
  }
  auto root = [&](std::size_t s) {
    while (parent[s] != s) s = parent[s];
    return s;
  };

  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < total; ++s)
    if (alive[s]) order.push_back(s);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pool.means[a] < pool.means[b]; });
  std::vector<std::size_t> rank(total, 0);
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  StickyHmmFit out;
  for (std::size_t s : order) {
    out.means.push_back(pool.means[s]);
    out.variances.push_back(pool.variances[s]);
    out.counts.push_back(pool.counts[s]);
  }
  out.diagnostics = pool.diagnostics;
  for (std::size_t f = 0; f < fits.size(); ++f)
    for (const auto& seq : fits[f].labels) {
      std::vector<std::size_t> mapped(seq.size());
      for (std::size_t t = 0; t < seq.size(); ++t) mapped[t] = rank[root(offset[f] + seq[t])];
      out.labels.push_back(std::move(mapped));
    }
  if (fits.size() == 1 && order.size() == fits.front().k_active()) {
    out.transition = fits.front().transition;
  } else {
    out.transition = empirical_transitions(out.labels, out.k_active());
  }
  return out;
}

std::vector<rf::Occupancy> state_occupancy(const StickyHmmFit& fit, double noise_var, double margin) {
  require(margin > 0.0, "state_occupancy: margin must be > 0");
  require(fit.n_channels() <= rf::kMaxChannels, "state_occupancy: too many channels");
  std::vector<rf::Occupancy> out;
  out.reserve(fit.k_active());
  for (const auto& m : fit.means) {
    rf::Occupancy bits = 0;
    for (std::size_t c = 0; c < m.size(); ++c)
      if (m[c] > noise_var + margin) bits |= rf::Occupancy{1} << c;
    out.push_back(bits);
  }
  return out;
}

}  // namespace sir::mapping
