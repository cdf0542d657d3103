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
#include "sir/perception/dwell.hpp"
#include "sir/perception/gmm.hpp"

namespace sir::perception {

/// Base measure and concentration prior for the DP mixture. The
/// Normal-Inverse-Gamma centre and scale are taken from the data: mu0 is the
/// sample mean and b0 the sample variance.
struct DpHypers {
  double kappa0 = 1.0;       ///< pseudo-count on the mean
  double a0 = 1.0;           ///< inverse-gamma shape
  double alpha_shape = 1.0;  ///< Gamma(shape, rate) prior on the concentration
  double alpha_rate = 1.0;
};

struct DpOptions {
  std::size_t sweeps = 300;
  std::size_t burn_in = 150;
  double prune_weight = 0.01;
  std::size_t init_clusters = 8;  ///< contiguous quantile blocks used as the starting partition
  std::size_t min_samples = 50;
  std::size_t split_merge_moves = 20;  ///< split-merge proposals per sweep (0 disables)
  DpHypers hypers;
};

struct DpFit {
  GmmFit gmm;
  std::vector<std::size_t> assignments;  ///< canonical component index per input sample
  double alpha = 1.0;
  DwellModel dwell;
  std::vector<std::size_t> occupied_trace;  ///< occupied component count after each sweep
  double mean_k_after_burn_in = 0.0;
};

/// Collapsed Gibbs sampling for a Dirichlet-process mixture of univariate
/// Gaussians with Normal-Inverse-Gamma base measure; the concentration is
/// resampled every sweep under its Gamma prior. Each sweep also runs
/// sequentially-allocated split-merge Metropolis-Hastings moves, which leave the
/// same posterior invariant but let the partition change by whole clusters. Components whose final weight is
/// below `prune_weight` are dissolved into the survivors. Samples are taken in
/// slot order so the dwell model can be estimated from the final assignments.
DpFit fit_ccdpgmm(std::span<const double> samples, const DpOptions& options, Rng& rng);

}  // namespace sir::perception
