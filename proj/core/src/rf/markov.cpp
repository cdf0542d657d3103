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

#include "sir/rf/markov.hpp"

#include <algorithm>
#include <numeric>

#include "sir/common/error.hpp"

namespace sir::rf {

MarkovChannelSet::MarkovChannelSet(std::vector<std::size_t> assignment, double p01, double p11, std::vector<bool> idle)
    : assignment_(std::move(assignment)), p01_(p01), p11_(p11), idle_(std::move(idle)) {
  require(p01 >= 0.0 && p01 <= 1.0 && p11 >= 0.0 && p11 <= 1.0, "MarkovChannelSet: probabilities must lie in [0, 1]");
  require(!assignment_.empty(), "MarkovChannelSet: at least one channel is required");
  std::vector<std::size_t> sizes(idle_.size(), 0);
  for (std::size_t s : assignment_) {
    require(s < idle_.size(), "MarkovChannelSet: channel assigned to an unknown subset");
    ++sizes[s];
  }
  require(std::find(sizes.begin(), sizes.end(), 0U) == sizes.end(), "MarkovChannelSet: every subset must be non-empty");
}

std::vector<std::size_t> MarkovChannelSet::channels_in(std::size_t subset) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < assignment_.size(); ++c)
    if (assignment_[c] == subset) out.push_back(c);
  return out;
}

void MarkovChannelSet::step(Rng& rng) {
  for (std::size_t s = 0; s < idle_.size(); ++s) {
    const double p_idle = idle_[s] ? p11_ : p01_;
    idle_[s] = uniform01(rng) < p_idle;
  }
}

double stationary_idle(double p01, double p11) {
  const double denom = 1.0 - p11 + p01;
  return denom > 0.0 ? p01 / denom : 0.5;
}

MarkovChannelSet make_markov_channel_set(std::size_t n_channels, std::size_t n_subsets, double p01, double p11,
                                         Rng& rng) {
  require(n_subsets >= 1 && n_subsets <= n_channels, "make_markov_channel_set: need 1 <= subsets <= channels");
  std::vector<std::size_t> order(n_channels);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> assignment(n_channels);
  for (std::size_t i = 0; i < n_channels; ++i) assignment[order[i]] = i % n_subsets;
  std::vector<bool> idle(n_subsets);
  const double pi = stationary_idle(p01, p11);
  for (std::size_t s = 0; s < n_subsets; ++s) idle[s] = uniform01(rng) < pi;
  return MarkovChannelSet(std::move(assignment), p01, p11, std::move(idle));
}

}  // namespace sir::rf
