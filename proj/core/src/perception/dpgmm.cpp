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

#include "sir/perception/dpgmm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/common/log.hpp"
#include "sir/common/stats.hpp"

namespace sir::perception {

namespace {

// Sufficient statistics of one cluster over standardized data.
struct Cluster {
  double n = 0.0;
  double sum = 0.0;
  double sumsq = 0.0;
  // Cached Student-t predictive: log t(x) = log_norm - shape * log1p((x - loc)^2 * inv_scale)
  double log_norm = 0.0;
  double loc = 0.0;
  double inv_scale = 0.0;
  double shape = 0.0;
};

class NigPredictive {
 public:
  NigPredictive(double kappa0, double a0, double b0) : kappa0_(kappa0), a0_(a0), b0_(b0) {}

  struct Posterior {
    double kappa, mu, a, b;
  };

  Posterior posterior(const Cluster& c) const {
    Posterior p{kappa0_ + c.n, 0.0, a0_ + 0.5 * c.n, b0_};
    if (c.n > 0) {
      const double mean = c.sum / c.n;
      const double ss = std::max(0.0, c.sumsq - c.sum * mean);
      p.mu = c.sum / p.kappa;  // mu0 = 0 after standardization
      p.b += 0.5 * ss + kappa0_ * c.n * mean * mean / (2.0 * p.kappa);
    }
    return p;
  }

  void refresh(Cluster& c) const {
    const Posterior p = posterior(c);
    const double nu = 2.0 * p.a;
    const double scale2 = p.b * (p.kappa + 1.0) / (p.a * p.kappa);
    c.loc = p.mu;
    c.inv_scale = 1.0 / (nu * scale2);
    c.shape = 0.5 * (nu + 1.0);
    c.log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi * scale2);
  }

  /// Log marginal likelihood of the cluster's data under the base measure.
  double log_marginal(const Cluster& c) const {
    const Posterior p = posterior(c);
    return std::lgamma(p.a) - std::lgamma(a0_) + a0_ * std::log(b0_) - p.a * std::log(p.b) +
           0.5 * std::log(kappa0_ / p.kappa) - 0.5 * c.n * std::log(2.0 * std::numbers::pi);
  }

  static double log_pred(const Cluster& c, double x) {
    const double d = x - c.loc;
    return c.log_norm - c.shape * std::log1p(d * d * c.inv_scale);
  }

 private:
  double kappa0_, a0_, b0_;
};

double sample_gamma(double shape, double rate, Rng& rng) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

// Escobar & West auxiliary-variable update of the concentration.
double resample_alpha(double alpha, std::size_t k, std::size_t n, const DpHypers& h, Rng& rng) {
  const double x = sample_gamma(alpha + 1.0, 1.0, rng);
  const double y = sample_gamma(static_cast<double>(n), 1.0, rng);
  const double eta = x / (x + y);
  const double rate = h.alpha_rate - std::log(eta);
  const double odds = (h.alpha_shape + static_cast<double>(k) - 1.0) / (static_cast<double>(n) * rate);
  const double shape = uniform01(rng) < odds / (1.0 + odds) ? h.alpha_shape + static_cast<double>(k)
                                                             : h.alpha_shape + static_cast<double>(k) - 1.0;
  return sample_gamma(std::max(shape, 1e-3), rate, rng);
}

void add(Cluster& c, double x) {
  c.n += 1;
  c.sum += x;
  c.sumsq += x * x;
}

// One sequentially-allocated split-merge proposal (Dahl 2003).
void split_merge(std::span<const double> xs, std::vector<std::size_t>& z, std::vector<Cluster>& clusters, double alpha,
                 const NigPredictive& nig, Rng& rng) {
  const std::size_t n = xs.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const std::size_t i = pick(rng);
  std::size_t j = pick(rng);
  while (j == i) j = pick(rng);
  const std::size_t ci = z[i], cj = z[j];
  const bool split = ci == cj;

  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < n; ++k)
    if (k != i && k != j && (z[k] == ci || z[k] == cj)) others.push_back(k);
  std::shuffle(others.begin(), others.end(), rng);

  Cluster a, b;
  add(a, xs[i]);
  add(b, xs[j]);
  nig.refresh(a);
  nig.refresh(b);
  std::vector<bool> to_b(others.size());
  double log_q = 0.0;
  for (std::size_t r = 0; r < others.size(); ++r) {
    const double x = xs[others[r]];
    const double la = std::log(a.n) + NigPredictive::log_pred(a, x);
    const double lb = std::log(b.n) + NigPredictive::log_pred(b, x);
    const double log_pa = -std::log1p(std::exp(lb - la));
    const double log_pb = -std::log1p(std::exp(la - lb));
    bool choose_b;
    if (split) {
      choose_b = std::log(uniform01(rng)) < log_pb;
    } else {
      choose_b = z[others[r]] == cj;
    }
    log_q += choose_b ? log_pb : log_pa;
    to_b[r] = choose_b;
    Cluster& dst = choose_b ? b : a;
    add(dst, x);
    nig.refresh(dst);
  }
  Cluster merged;
  merged.n = a.n + b.n;
  merged.sum = a.sum + b.sum;
  merged.sumsq = a.sumsq + b.sumsq;
  const double log_split_over_merge = std::log(alpha) + std::lgamma(a.n) + std::lgamma(b.n) - std::lgamma(merged.n) +
                                      nig.log_marginal(a) + nig.log_marginal(b) - nig.log_marginal(merged);
  const double log_accept = split ? log_split_over_merge - log_q : log_q - log_split_over_merge;
  if (!(std::log(uniform01(rng)) < log_accept)) return;

  if (split) {
    const std::size_t fresh = clusters.size();
    clusters.push_back(b);
    clusters[ci] = a;
    z[j] = fresh;
    for (std::size_t r = 0; r < others.size(); ++r)
      if (to_b[r]) z[others[r]] = fresh;
    nig.refresh(clusters[ci]);
    nig.refresh(clusters[fresh]);
  } else {
    clusters[ci] = merged;
    nig.refresh(clusters[ci]);
    for (auto& zz : z)
      if (zz == cj) zz = ci;
    const std::size_t last = clusters.size() - 1;
    if (cj != last) {
      clusters[cj] = clusters[last];
      for (auto& zz : z)
        if (zz == last) zz = cj;
    }
    clusters.pop_back();
  }
}

}  // namespace

DpFit fit_ccdpgmm(std::span<const double> samples, const DpOptions& options, Rng& rng) {
  const std::size_t n = samples.size();
  if (n < options.min_samples)
    throw InvalidArgument(fmt::format("fit_ccdpgmm: {} samples supplied, at least {} are required", n, options.min_samples));
  for (double x : samples)
    if (!std::isfinite(x)) throw InvalidArgument("fit_ccdpgmm: non-finite sample");

  const double center = mean(samples);
  const double spread = std::sqrt(variance_mle(samples));
  DpFit out;
  out.alpha = options.hypers.alpha_shape / options.hypers.alpha_rate;

  if (!(spread > 1e-12 * std::max(1.0, std::abs(center)))) {
    // A single atom: nothing to cluster.
    out.gmm.weights = {1.0};
    out.gmm.means = {center};
    out.gmm.variances = {std::max(spread * spread, 1e-24 * std::max(1.0, center * center))};
    out.gmm.log_likelihood = 0.0;
    out.assignments.assign(n, 0);
    out.dwell = infer_dwell(out.assignments, 1);
    out.occupied_trace.assign(options.sweeps, 1);
    out.mean_k_after_burn_in = 1.0;
    return out;
  }

  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = (samples[i] - center) / spread;

  const NigPredictive nig(options.hypers.kappa0, options.hypers.a0, 1.0);
  Cluster prior;
  nig.refresh(prior);

  // Start from contiguous quantile blocks.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  const std::size_t k0 = std::clamp<std::size_t>(options.init_clusters, 1, n);
  std::vector<Cluster> clusters(k0);
  std::vector<std::size_t> z(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    z[i] = r * k0 / n;
    auto& c = clusters[z[i]];
    c.n += 1;
    c.sum += xs[i];
    c.sumsq += xs[i] * xs[i];
  }
  for (auto& c : clusters) nig.refresh(c);

  double alpha = out.alpha;
  std::vector<double> logp;
  std::vector<std::size_t> visit(n);
  std::iota(visit.begin(), visit.end(), 0);
  double k_accum = 0.0;
  std::size_t k_count = 0;
  // Point estimate: highest-posterior partition visited after burn-in.
  double best_log_post = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_z;
  std::vector<Cluster> best_clusters;

  for (std::size_t sweep = 0; sweep < options.sweeps; ++sweep) {
    std::shuffle(visit.begin(), visit.end(), rng);
    for (std::size_t i : visit) {
      const double x = xs[i];
      {
        auto& c = clusters[z[i]];
        c.n -= 1;
        c.sum -= x;
        c.sumsq -= x * x;
        if (c.n <= 0.5) {
          // Drop the now-empty cluster; the last one takes its index.
          const std::size_t gone = z[i];
          const std::size_t last = clusters.size() - 1;
          if (gone != last) {
            clusters[gone] = clusters[last];
            for (auto& zz : z)
              if (zz == last) zz = gone;
          }
          clusters.pop_back();
        } else {
          nig.refresh(c);
        }
      }
      const std::size_t k = clusters.size();
      logp.resize(k + 1);
      for (std::size_t j = 0; j < k; ++j) logp[j] = std::log(clusters[j].n) + NigPredictive::log_pred(clusters[j], x);
      logp[k] = std::log(alpha) + NigPredictive::log_pred(prior, x);
      const double m = *std::max_element(logp.begin(), logp.end());
      double total = 0.0;
      for (double& v : logp) {
        v = std::exp(v - m);
        total += v;
      }
      double u = uniform01(rng) * total;
      std::size_t pick = 0;
      while (pick < k && u >= logp[pick]) {
        u -= logp[pick];
        ++pick;
      }
      if (pick == k) clusters.emplace_back();
      auto& c = clusters[pick];
      c.n += 1;
      c.sum += x;
      c.sumsq += x * x;
      nig.refresh(c);
      z[i] = pick;
    }
    for (std::size_t m = 0; m < options.split_merge_moves; ++m) split_merge(xs, z, clusters, alpha, nig, rng);
    alpha = resample_alpha(alpha, clusters.size(), n, options.hypers, rng);
    out.occupied_trace.push_back(clusters.size());
    if (sweep >= options.burn_in) {
      k_accum += static_cast<double>(clusters.size());
      ++k_count;
      double lp = static_cast<double>(clusters.size()) * std::log(alpha) + std::lgamma(alpha) -
                  std::lgamma(alpha + static_cast<double>(n));
      for (const auto& c : clusters) lp += std::lgamma(c.n) + nig.log_marginal(c);
      if (lp > best_log_post) {
        best_log_post = lp;
        best_z = z;
        best_clusters = clusters;
      }
    }
  }
  if (!best_z.empty()) {
    z = std::move(best_z);
    clusters = std::move(best_clusters);
  }
  out.alpha = alpha;
  out.mean_k_after_burn_in = k_count > 0 ? k_accum / static_cast<double>(k_count) : static_cast<double>(clusters.size());

  // Prune light components: their samples move to the best surviving component.
  std::vector<bool> keep(clusters.size());
  std::size_t heaviest = 0;
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    keep[j] = clusters[j].n / static_cast<double>(n) >= options.prune_weight;
    if (clusters[j].n > clusters[heaviest].n) heaviest = j;
  }
  keep[heaviest] = true;
  std::vector<std::size_t> survivors;
  for (std::size_t j = 0; j < clusters.size(); ++j)
    if (keep[j]) survivors.push_back(j);
  if (survivors.size() < clusters.size())
    log().debug("fit_ccdpgmm: pruned {} of {} components", clusters.size() - survivors.size(), clusters.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[z[i]]) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j : survivors) {
      const double score = std::log(clusters[j].n) + NigPredictive::log_pred(clusters[j], xs[i]);
      if (score > best) {
        best = score;
        z[i] = j;
      }
    }
  }
  std::vector<Cluster> final_stats(clusters.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = final_stats[z[i]];
    c.n += 1;
    c.sum += xs[i];
    c.sumsq += xs[i] * xs[i];
  }

  // Posterior-mean component parameters, back on the original scale.
  struct Comp {
    double weight, mean, var;
    std::size_t id;
  };
  std::vector<Comp> comps;
  for (std::size_t j : survivors) {
    if (final_stats[j].n <= 0) continue;
    const auto p = nig.posterior(final_stats[j]);
    comps.push_back({final_stats[j].n / static_cast<double>(n), center + spread * p.mu,
                     spread * spread * p.b / (p.a - 1.0), j});
  }
  std::sort(comps.begin(), comps.end(), [](const Comp& a, const Comp& b) { return a.mean < b.mean; });
  std::vector<std::size_t> remap(clusters.size(), 0);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    remap[comps[c].id] = c;
    out.gmm.weights.push_back(comps[c].weight);
    out.gmm.means.push_back(comps[c].mean);
    out.gmm.variances.push_back(comps[c].var);
  }
  out.assignments.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.assignments[i] = remap[z[i]];
  out.gmm.log_likelihood = log_likelihood(out.gmm, samples);
  out.dwell = infer_dwell(out.assignments, out.gmm.k());
  return out;
}

}  // namespace sir::perception
