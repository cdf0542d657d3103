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
#include "sir/rf/scenario.hpp"

namespace sir::rf {

struct PowerSegment {
  std::size_t level = 0;
  std::size_t length = 0;
};

/// Semi-Markov level process: at each renewal a level is drawn from the priors
/// (the same level may be redrawn) and held for 1 + Geometric(1/mean_dwell)
/// slots. The last segment is truncated so the lengths sum to `horizon`.
std::vector<PowerSegment> sample_power_segments(const PuNode& pu, std::size_t horizon, Rng& rng);

/// Per-slot level indices (indices into pu.power_levels), length `horizon`.
std::vector<std::size_t> sample_power_process(const PuNode& pu, std::size_t horizon, Rng& rng);

}  // namespace sir::rf
