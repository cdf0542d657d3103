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
#include <iosfwd>
#include <string>
#include <vector>

#include "sir/common/geometry.hpp"
#include "sir/common/random.hpp"
#include "sir/rf/scenario.hpp"

namespace sir::rf {

/// Bit c set means channel c is occupied. At most 64 channels.
using Occupancy = std::uint64_t;

inline constexpr std::size_t kMaxChannels = 64;

struct SensingSample {
  std::size_t su_id = 0;
  std::size_t seq_index = 0;
  Point location;
  std::vector<double> energies;  ///< one EnergyStatistic per channel
};

struct MappingDataset {
  std::size_t n_channels = 0;
  std::vector<std::vector<SensingSample>> sequences;  ///< one ordered sequence per SU
  std::vector<std::vector<Occupancy>> truth;          ///< ground-truth occupancy per sample
};

/// Ground-truth occupancy at a location (every PU transmits at its active level).
Occupancy occupancy_at(const ScenarioConfig& cfg, Point location);

/// Channels of `bits` rendered ch0-first as '0'/'1' characters.
std::string occupancy_string(Occupancy bits, std::size_t n_channels);

/// Per-SU sequences: locations uniform along each track, sorted along it;
/// energies from sense_window with the superposed power of covering PUs.
MappingDataset generate_mapping_dataset(const ScenarioConfig& cfg, Rng& rng);

/// CSV with header `su_id,seq,x_km,y_km,ch0_energy,...,label_bits`.
void write_dataset_csv(std::ostream& out, const MappingDataset& data);

}  // namespace sir::rf
