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

#include "sir/rf/dataset.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/rf/sensing.hpp"

namespace sir::rf {

Occupancy occupancy_at(const ScenarioConfig& cfg, Point location) {
  Occupancy bits = 0;
  for (const auto& pu : cfg.pus)
    if (received_power_at(pu, pu.active_level(), location) > 0.0) bits |= Occupancy{1} << pu.channel;
  return bits;
}

std::string occupancy_string(Occupancy bits, std::size_t n_channels) {
  std::string s(n_channels, '0');
  for (std::size_t c = 0; c < n_channels; ++c)
    if ((bits >> c) & 1U) s[c] = '1';
  return s;
}

MappingDataset generate_mapping_dataset(const ScenarioConfig& cfg, Rng& rng) {
  require(!cfg.sus.empty(), "generate_mapping_dataset: at least one SU is required");
  MappingDataset data;
  data.n_channels = cfg.channel_count();
  std::uniform_real_distribution<double> along(0.0, 1.0);
  for (std::size_t su = 0; su < cfg.sus.size(); ++su) {
    const auto& track = cfg.sus[su];
    std::vector<double> ts(track.n_samples);
    for (double& t : ts) t = along(rng);
    std::sort(ts.begin(), ts.end());

    std::vector<SensingSample> seq;
    std::vector<Occupancy> truth;
    seq.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const Point loc{track.start.x + ts[i] * (track.end.x - track.start.x),
                      track.start.y + ts[i] * (track.end.y - track.start.y)};
      std::vector<double> power(data.n_channels, 0.0);
      for (const auto& pu : cfg.pus) power[pu.channel] += received_power_at(pu, pu.active_level(), loc);
      SensingSample s{su, i, loc, std::vector<double>(data.n_channels)};
      for (std::size_t c = 0; c < data.n_channels; ++c)
        s.energies[c] = sense_window(power[c], cfg.noise_var, cfg.samples_per_window, rng);
      seq.push_back(std::move(s));
      truth.push_back(occupancy_at(cfg, loc));
    }
    data.sequences.push_back(std::move(seq));
    data.truth.push_back(std::move(truth));
  }
  return data;
}

void write_dataset_csv(std::ostream& out, const MappingDataset& data) {
  out << "su_id,seq,x_km,y_km";
  for (std::size_t c = 0; c < data.n_channels; ++c) out << ",ch" << c << "_energy";
  out << ",label_bits\n";
  for (std::size_t su = 0; su < data.sequences.size(); ++su) {
    for (std::size_t i = 0; i < data.sequences[su].size(); ++i) {
      const auto& s = data.sequences[su][i];
      out << fmt::format("{},{},{:.6f},{:.6f}", s.su_id, s.seq_index, s.location.x, s.location.y);
      for (double e : s.energies) out << fmt::format(",{:.9g}", e);
      out << ',' << occupancy_string(data.truth[su][i], data.n_channels) << '\n';
    }
  }
}

}  // namespace sir::rf
