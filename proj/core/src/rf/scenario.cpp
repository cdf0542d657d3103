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

#include "sir/rf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/rf/dataset.hpp"

namespace sir::rf {

std::size_t PuNode::active_level() const {
  return static_cast<std::size_t>(std::distance(power_levels.begin(),
                                                std::max_element(power_levels.begin(), power_levels.end())));
}

std::size_t ScenarioConfig::channel_count() const {
  if (n_channels > 0) return n_channels;
  std::size_t n = 1;
  for (const auto& pu : pus) n = std::max(n, pu.channel + 1);
  return n;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError(fmt::format("{}: {}", field, what));
}

}  // namespace

void validate(const PuNode& pu, std::size_t index) {
  const auto field = [index](const char* name) { return fmt::format("pus[{}].{}", index, name); };
  if (pu.power_levels.empty()) fail(field("power_levels"), "at least one level is required");
  if (pu.level_priors.size() != pu.power_levels.size())
    fail(field("level_priors"), fmt::format("expected {} entries, got {}", pu.power_levels.size(), pu.level_priors.size()));
  std::size_t zeros = 0;
  for (double p : pu.power_levels) {
    if (!std::isfinite(p) || p < 0.0) fail(field("power_levels"), "powers must be finite and >= 0");
    if (p == 0.0) ++zeros;
  }
  if (zeros > 1) fail(field("power_levels"), "at most one zero (OFF) level is permitted");
  double total = 0.0;
  for (double q : pu.level_priors) {
    if (!std::isfinite(q) || q < 0.0) fail(field("level_priors"), "priors must be finite and >= 0");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(field("level_priors"), fmt::format("priors sum to {:.12g}, not 1", total));
  if (!(pu.coverage_radius > 0.0)) fail(field("coverage_radius"), "must be > 0");
  if (!(pu.mean_dwell >= 1.0)) fail(field("mean_dwell"), "must be >= 1 slot");
  if (pu.channel >= kMaxChannels) fail(field("channel"), "channel index too large");
}

void validate(const ScenarioConfig& cfg) {
  if (!(cfg.area.width > 0.0) || !(cfg.area.height > 0.0)) fail("area_km", "width and height must be > 0");
  if (!(cfg.noise_var > 0.0) || !std::isfinite(cfg.noise_var)) fail("noise_var", "must be > 0");
  if (cfg.samples_per_window < 1) fail("samples_per_window", "must be >= 1");
  if (!(cfg.slot_duration > 0.0)) fail("slot_duration", "must be > 0");
  for (std::size_t i = 0; i < cfg.pus.size(); ++i) {
    validate(cfg.pus[i], i);
    if (!cfg.area.contains(cfg.pus[i].position)) fail(fmt::format("pus[{}].position", i), "outside the area");
  }
  for (std::size_t i = 0; i < cfg.sus.size(); ++i) {
    const auto& su = cfg.sus[i];
    if (!cfg.area.contains(su.start)) fail(fmt::format("sus[{}].start", i), "outside the area");
    if (!cfg.area.contains(su.end)) fail(fmt::format("sus[{}].end", i), "outside the area");
    if (su.n_samples < 1) fail(fmt::format("sus[{}].n_samples", i), "must be >= 1");
  }
  const std::size_t channels = cfg.channel_count();
  if (channels > kMaxChannels) fail("n_channels", "at most 64 channels are supported");
  for (std::size_t i = 0; i < cfg.pus.size(); ++i)
    if (cfg.pus[i].channel >= channels) fail(fmt::format("pus[{}].channel", i), "not below n_channels");
}

ScenarioConfig reference_mapping_scenario() {
  ScenarioConfig cfg;
  cfg.area = {12.0, 12.0};
  cfg.n_channels = 3;
  cfg.noise_var = 1.0;
  cfg.samples_per_window = 100;
  cfg.seed = 5;
  const Point centers[] = {{3.5, 7.5}, {6.6, 6.6}, {9.0, 4.0}};
  for (std::size_t i = 0; i < 3; ++i) {
    PuNode pu;
    pu.position = centers[i];
    pu.coverage_radius = 2.2;
    pu.channel = i;
    pu.power_levels = {2.0};
    pu.level_priors = {1.0};
    pu.mean_dwell = 1.0;
    cfg.pus.push_back(pu);
  }
  struct Seg {
    Point a, b;
    std::size_t ch;
  };
  const Seg tracks[] = {
      {{0.5, 7.5}, {11.5, 7.5}, 0},  {{0.5, 4.0}, {11.5, 4.0}, 2},  {{6.6, 0.5}, {6.6, 11.5}, 1},
      {{3.5, 0.5}, {3.5, 11.5}, 0},  {{9.0, 0.5}, {9.0, 11.5}, 2},  {{0.5, 11.5}, {11.5, 0.5}, 0},
      {{0.5, 0.5}, {11.5, 11.5}, 1}, {{0.5, 5.5}, {11.5, 5.5}, 2},  {{8.0, 0.5}, {8.0, 11.5}, 1},
  };
  for (const auto& t : tracks) cfg.sus.push_back(SuTrack{t.a, t.b, 200, t.ch});
  return cfg;
}

}  // namespace sir::rf
