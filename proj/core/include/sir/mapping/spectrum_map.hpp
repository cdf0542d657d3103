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
#include <iosfwd>
#include <string>
#include <vector>

#include "sir/common/geometry.hpp"
#include "sir/common/random.hpp"
#include "sir/mapping/coverage.hpp"
#include "sir/mapping/fusion.hpp"
#include "sir/mapping/sticky_hmm.hpp"
#include "sir/rf/dataset.hpp"
#include "sir/rf/scenario.hpp"

namespace sir::mapping {

struct MapState {
  std::size_t label = 0;
  rf::Occupancy occupancy = 0;
};

struct SpectrumMap {
  Area area;
  std::size_t n_channels = 0;
  std::vector<MapState> states;
  std::vector<CoverageCircle> circles;
};

/// Bit c set iff the location lies inside some circle on channel c.
rf::Occupancy busy_channels(const SpectrumMap& map, Point location);

/// Channels not covered by any circle at `location`, ascending.
std::vector<std::size_t> query_spectrum(const SpectrumMap& map, Point location);

/// Fraction of `n_points` uniform locations whose predicted busy set equals
/// the ground truth of `cfg`.
double query_accuracy(const SpectrumMap& map, const rf::ScenarioConfig& cfg, std::size_t n_points, Rng& rng);

struct MappingOptions {
  StickyHmmOptions hmm;
  double merge_tol = 1.0;
  double occupancy_margin = 0.5;
};

struct MappingResult {
  StickyHmmFit fused;
  std::vector<std::vector<std::size_t>> labels;  ///< per SU, dataset order
  std::vector<rf::Occupancy> occupancy;          ///< per fused state
  SpectrumMap map;
  std::vector<std::string> diagnostics;
};

/// One HMM per cluster head over its SUs' sequences, fused into a global
/// library; one enclosing circle per occupied channel.
MappingResult build_spectrum_map(const rf::ScenarioConfig& cfg, const rf::MappingDataset& data,
                                 const MappingOptions& options, Rng& rng);

/// TOML with top-level `n_channels`, `area = [w, h]`, arrays of tables
/// `[[states]]` (label, occupancy) and `[[circles]]` (x, y, radius, channel).
void write_map_toml(std::ostream& out, const SpectrumMap& map);
SpectrumMap read_map_toml(std::istream& in, const std::string& source_name = "<map>");
SpectrumMap load_map(const std::string& path);

}  // namespace sir::mapping
