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

#include "sir/perception/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sir/common/error.hpp"
#include "sir/common/stats.hpp"

namespace sir::perception {

void canonicalize(GmmFit& fit) {
  const std::size_t k = fit.k();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit.means[a] < fit.means[b]; });
  GmmFit sorted;
  sorted.log_likelihood = fit.log_likelihood;
  double total = 0.0;
  for (std::size_t i : order) total += fit.weights[i];
  for (std::size_t i : order) {
    sorted.weights.push_back(fit.weights[i] / total);
    sorted.means.push_back(fit.means[i]);
    sorted.variances.push_back(fit.variances[i]);
  }
  fit = std::move(sorted);
}

double log_likelihood(const GmmFit& fit, std::span<const double> samples) {
  std::vector<double> terms(fit.k());
  double ll = 0.0;
  for (double x : samples) {
    for (std::size_t j = 0; j < fit.k(); ++j)
      terms[j] = std::log(fit.weights[j]) + normal_log_pdf(x, fit.means[j], fit.variances[j]);
    ll += log_sum_exp(terms);
  }
  return ll;
}

std::size_t most_responsible(const GmmFit& fit, double x) {
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < fit.k(); ++j) {
    const double score = std::log(fit.weights[j]) + normal_log_pdf(x, fit.means[j], fit.variances[j]);
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

GmmFit gmm_from_assignments(std::span<const double> samples, std::span<const std::size_t> assignments, std::size_t k,
                            double variance_floor) {
  require(samples.size() == assignments.size(), "gmm_from_assignments: size mismatch");
  std::vector<double> n(k, 0.0), s(k, 0.0), ss(k, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t j = assignments[i];
    require(j < k, "gmm_from_assignments: assignment out of range");
    n[j] += 1.0;
    s[j] += samples[i];
  }
  for (std::size_t j = 0; j < k; ++j)
    if (n[j] > 0) s[j] /= n[j];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - s[assignments[i]];
    ss[assignments[i]] += d * d;
  }
  GmmFit fit;
  for (std::size_t j = 0; j < k; ++j) {
    if (n[j] == 0) continue;
    fit.weights.push_back(n[j] / static_cast<double>(samples.size()));
    fit.means.push_back(s[j]);
    fit.variances.push_back(std::max(ss[j] / n[j], variance_floor));
  }
  canonicalize(fit);
  fit.log_likelihood = log_likelihood(fit, samples);
  return fit;
}

namespace {

EmTrace run_em(std::span<const double> xs, std::size_t k, const EmOptions& opt, std::size_t first, double floor) {
  const std::size_t n = xs.size();
  const double global_var = std::max(variance_mle(xs), floor);

  // Farthest-point seeding.
  std::vector<double> centers{xs[first]};
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = std::abs(xs[i] - centers[0]);
  while (centers.size() < k) {
    const auto far = static_cast<std::size_t>(std::distance(nearest.begin(), std::max_element(nearest.begin(), nearest.end())));
    centers.push_back(xs[far]);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], std::abs(xs[i] - xs[far]));
  }

  GmmFit fit;
  fit.means = centers;
  fit.weights.assign(k, 1.0 / static_cast<double>(k));
  fit.variances.assign(k, global_var / static_cast<double>(k * k));

  EmTrace trace;
  std::vector<double> resp(n * k);
  std::vector<double> logs(k);
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    // E-step; the log-likelihood is that of the parameters entering this iteration.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j)
        logs[j] = std::log(fit.weights[j]) + normal_log_pdf(xs[i], fit.means[j], fit.variances[j]);
      const double lse = log_sum_exp(logs);
      ll += lse;
      for (std::size_t j = 0; j < k; ++j) resp[i * k + j] = std::exp(logs[j] - lse);
    }
    trace.log_likelihood_history.push_back(ll);
    if (std::isfinite(previous) && std::abs(ll - previous) <= opt.tolerance * std::abs(ll)) break;
    previous = ll;

    // M-step.
    for (std::size_t j = 0; j < k; ++j) {
      double nj = 0.0, sj = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nj += resp[i * k + j];
        sj += resp[i * k + j] * xs[i];
      }
      if (nj <= std::numeric_limits<double>::min()) {
        // Starved component: leave it where it is with a tiny weight.
        fit.weights[j] = 1e-300;
        continue;
      }
      const double mj = sj / nj;
      double vj = 0.0;
      for (std::size_t i = 0; i < n; ++i) vj += resp[i * k + j] * (xs[i] - mj) * (xs[i] - mj);
      fit.weights[j] = nj / static_cast<double>(n);
      fit.means[j] = mj;
      fit.variances[j] = std::max(vj / nj, floor);
    }
  }
  fit.log_likelihood = trace.log_likelihood_history.back();
  canonicalize(fit);
  trace.fit = std::move(fit);
  return trace;
}

}  // namespace

EmTrace fit_emgmm_traced(std::span<const double> samples, std::size_t components, const EmOptions& options, Rng& rng) {
  require(components >= 1, "fit_emgmm: component count must be >= 1");
  require(samples.size() >= components, "fit_emgmm: fewer samples than components");
  for (double x : samples) require(std::isfinite(x), "fit_emgmm: non-finite sample");
  const double floor = std::max(variance_mle(samples), 1e-300) * 1e-8;
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  EmTrace best;
  best.fit.log_likelihood = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
    EmTrace t = run_em(samples, components, options, pick(rng), floor);
    if (t.fit.log_likelihood > best.fit.log_likelihood) best = std::move(t);
  }
  return best;
}

GmmFit fit_emgmm(std::span<const double> samples, std::size_t components, const EmOptions& options, Rng& rng) {
  return fit_emgmm_traced(samples, components, options, rng).fit;
}

}  // namespace sir::perception
