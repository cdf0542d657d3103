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
#include <vector>

#include "sir/common/random.hpp"

namespace sir::rf {

/// Two-state channels grouped into subsets; channels in one subset always
/// share the same idle/occupied state.
class MarkovChannelSet {
 public:
  /// `assignment[c]` is the subset of channel c; `idle[s]` the initial state of subset s.
  MarkovChannelSet(std::vector<std::size_t> assignment, double p01, double p11, std::vector<bool> idle);

  std::size_t n_channels() const { return assignment_.size(); }
  std::size_t n_subsets() const { return idle_.size(); }
  std::size_t subset_of(std::size_t channel) const { return assignment_.at(channel); }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  std::vector<std::size_t> channels_in(std::size_t subset) const;

  bool idle(std::size_t channel) const { return idle_[assignment_.at(channel)]; }
  bool subset_idle(std::size_t subset) const { return idle_.at(subset); }
  const std::vector<bool>& subset_states() const { return idle_; }

  double p01() const { return p01_; }  ///< occupied -> idle
  double p11() const { return p11_; }  ///< idle -> idle

  /// Advance every subset one slot, independently.
  void step(Rng& rng);

 private:
  std::vector<std::size_t> assignment_;
  double p01_;
  double p11_;
  std::vector<bool> idle_;
};

/// One step of the channel set dynamics.
inline void markov_channel_step(MarkovChannelSet& channels, Rng& rng) { channels.step(rng); }

/// Long-run idle probability p01 / (1 - p11 + p01); 0.5 for the doubly absorbing chain.
double stationary_idle(double p01, double p11);

/// Random partition of `n_channels` into `n_subsets` subsets whose sizes differ
/// by at most one, with subset states drawn from the stationary distribution.
MarkovChannelSet make_markov_channel_set(std::size_t n_channels, std::size_t n_subsets, double p01, double p11,
                                         Rng& rng);

}  // namespace sir::rf
