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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sir/common/random.hpp"
#include "sir/rf/dataset.hpp"

namespace sir::mapping {

struct StickyHmmHypers {
  double gamma = 1.0;   ///< top-level concentration
  double alpha = 1.0;   ///< transition concentration
  double kappa = 50.0;  ///< self-transition bias
  double mean_kappa0 = 0.01;
  double var_a0 = 1.0;
};

struct StickyHmmOptions {
  std::size_t k_max = 20;
  std::size_t sweeps = 500;
  std::size_t burn_in = 250;
  StickyHmmHypers hypers;
};

/// States are ordered lexicographically by emission mean vector.
struct StickyHmmFit {
  Eigen::MatrixXd transition;                 ///< k x k, rows sum to 1
  std::vector<std::vector<double>> means;      ///< [state][channel]
  std::vector<std::vector<double>> variances;  ///< [state][channel]
  std::vector<double> counts;                  ///< samples per state
  std::vector<std::vector<std::size_t>> labels;  ///< [sequence][sample]
  std::vector<std::string> diagnostics;

  std::size_t k_active() const { return means.size(); }
  std::size_t n_channels() const { return means.empty() ? 0 : means.front().size(); }
};

/// Observations for one sequence: one energy vector per sample.
using ObservationSequence = std::vector<std::vector<double>>;

std::vector<ObservationSequence> observations(const std::vector<std::vector<rf::SensingSample>>& sequences);

/// Weak-limit sticky HDP-HMM with one state library shared by all sequences.
/// Blocked Gibbs: forward-filtering backward-sampling per sequence, then the
/// auxiliary-count update of the global weights, transition rows and
/// Normal-Inverse-Gamma emissions. The returned labels are those of the last
/// sweep; states without samples there are dropped.
StickyHmmFit fit_sticky_hmm(const std::vector<ObservationSequence>& sequences, const StickyHmmOptions& options,
                            Rng& rng);
StickyHmmFit fit_sticky_hmm(const std::vector<std::vector<rf::SensingSample>>& sequences,
                            const StickyHmmOptions& options, Rng& rng);

/// Transition rows from label counts; a state never left keeps probability 1 on itself.
Eigen::MatrixXd empirical_transitions(const std::vector<std::vector<std::size_t>>& labels, std::size_t k);

/// Number of label changes divided by the number of adjacent pairs.
double switch_rate(const std::vector<std::vector<std::size_t>>& labels);

}  // namespace sir::mapping
