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
#include <cstdint>
#include <vector>

#include "sir/common/geometry.hpp"

namespace sir::rf {

/// A primary transmitter with a multi-level power mode and a disk footprint.
struct PuNode {
  Point position;
  double coverage_radius = 2.2;       ///< km
  std::size_t channel = 0;
  std::vector<double> power_levels;   ///< linear received powers, one per level
  std::vector<double> level_priors;   ///< long-run probability of each level
  double mean_dwell = 1.0;            ///< slots

  std::size_t level_count() const { return power_levels.size(); }
  /// Index of the highest power level (the level used for static coverage).
  std::size_t active_level() const;
};

/// A mobile secondary user sampling along a straight segment.
struct SuTrack {
  Point start;
  Point end;
  std::size_t n_samples = 1;
  std::size_t cluster_head = 0;
};

struct ScenarioConfig {
  Area area{12.0, 12.0};
  std::vector<PuNode> pus;
  std::vector<SuTrack> sus;
  std::size_t n_channels = 0;  ///< 0 means one more than the largest PU channel
  double noise_var = 1.0;
  std::size_t samples_per_window = 500;
  double slot_duration = 1.0;
  std::uint64_t seed = 1;

  std::size_t channel_count() const;
};

/// Throws ValidationError naming the offending field (e.g. "pus[1].level_priors").
void validate(const PuNode& pu, std::size_t index);
void validate(const ScenarioConfig& cfg);

/// The three-PU, nine-SU mapping scenario on a 12 x 12 km area. PU footprints
/// overlap pairwise for (0,1) and (1,2) only, so the area holds six distinct
/// occupancy signatures, and every track crosses at least one footprint.
ScenarioConfig reference_mapping_scenario();

}  // namespace sir::rf
