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

#include "sir/rf/power_process.hpp"

#include <algorithm>

#include "sir/common/error.hpp"

namespace sir::rf {

std::vector<PowerSegment> sample_power_segments(const PuNode& pu, std::size_t horizon, Rng& rng) {
  require(horizon >= 1, "sample_power_process: horizon must be >= 1");
  require(!pu.power_levels.empty() && pu.level_priors.size() == pu.power_levels.size(),
          "sample_power_process: priors must match power levels");
  require(pu.mean_dwell >= 1.0, "sample_power_process: mean_dwell must be >= 1");

  std::discrete_distribution<std::size_t> pick(pu.level_priors.begin(), pu.level_priors.end());
  std::geometric_distribution<std::size_t> extra(1.0 / pu.mean_dwell);
  std::vector<PowerSegment> segments;
  std::size_t filled = 0;
  while (filled < horizon) {
    const std::size_t level = pick(rng);
    const std::size_t length = std::min<std::size_t>(1 + extra(rng), horizon - filled);
    segments.push_back({level, length});
    filled += length;
  }
  return segments;
}

std::vector<std::size_t> sample_power_process(const PuNode& pu, std::size_t horizon, Rng& rng) {
  std::vector<std::size_t> levels;
  levels.reserve(horizon);
  for (const auto& seg : sample_power_segments(pu, horizon, rng)) levels.insert(levels.end(), seg.length, seg.level);
  return levels;
}

}  // namespace sir::rf
