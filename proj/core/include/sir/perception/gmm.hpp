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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sir/common/random.hpp"

namespace sir::perception {

/// Univariate Gaussian mixture in canonical order (means ascending).
struct GmmFit {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> variances;
  double log_likelihood = 0.0;

  std::size_t k() const { return means.size(); }
};

/// Sort components by mean, renormalize weights.
void canonicalize(GmmFit& fit);

double log_likelihood(const GmmFit& fit, std::span<const double> samples);

/// Index of the most responsible component for x (ties to the lower index).
std::size_t most_responsible(const GmmFit& fit, double x);

/// Mixture built from hard assignments: empirical weights, means and biased
/// variances (floored at `variance_floor`). Components with no samples are dropped.
GmmFit gmm_from_assignments(std::span<const double> samples, std::span<const std::size_t> assignments, std::size_t k,
                            double variance_floor);

struct EmOptions {
  std::size_t restarts = 5;
  std::size_t max_iters = 500;
  double tolerance = 1e-10;  ///< relative log-likelihood change for convergence
};

struct EmTrace {
  GmmFit fit;
  std::vector<double> log_likelihood_history;  ///< of the winning restart, one entry per iteration
};

/// EM for a K-component mixture. Each restart seeds the means by farthest-point
/// selection from a random first sample; the best final log-likelihood wins.
GmmFit fit_emgmm(std::span<const double> samples, std::size_t components, const EmOptions& options, Rng& rng);
EmTrace fit_emgmm_traced(std::span<const double> samples, std::size_t components, const EmOptions& options, Rng& rng);

}  // namespace sir::perception
