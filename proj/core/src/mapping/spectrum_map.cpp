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

#include "sir/mapping/spectrum_map.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/common/log.hpp"
#include "sir/common/toml.hpp"

namespace sir::mapping {

rf::Occupancy busy_channels(const SpectrumMap& map, Point location) {
  rf::Occupancy bits = 0;
  for (const auto& c : map.circles)
    if (c.circle.contains(location)) bits |= rf::Occupancy{1} << c.channel;
  return bits;
}

std::vector<std::size_t> query_spectrum(const SpectrumMap& map, Point location) {
  if (!map.area.contains(location))
    throw InvalidArgument(fmt::format("query_spectrum: location ({}, {}) lies outside the {} x {} km area",
                                      location.x, location.y, map.area.width, map.area.height));
  const rf::Occupancy busy = busy_channels(map, location);
  std::vector<std::size_t> idle;
  for (std::size_t c = 0; c < map.n_channels; ++c)
    if (!((busy >> c) & 1U)) idle.push_back(c);
  return idle;
}

double query_accuracy(const SpectrumMap& map, const rf::ScenarioConfig& cfg, std::size_t n_points, Rng& rng) {
  require(n_points > 0, "query_accuracy: no query points");
  std::uniform_real_distribution<double> ux(0.0, cfg.area.width), uy(0.0, cfg.area.height);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_points; ++i) {
    const Point p{ux(rng), uy(rng)};
    if (busy_channels(map, p) == rf::occupancy_at(cfg, p)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n_points);
}

MappingResult build_spectrum_map(const rf::ScenarioConfig& cfg, const rf::MappingDataset& data,
                                 const MappingOptions& options, Rng& rng) {
  require(!data.sequences.empty(), "build_spectrum_map: empty dataset");
  require(data.sequences.size() == cfg.sus.size(), "build_spectrum_map: dataset does not match the SU list");
  std::map<std::size_t, std::vector<std::size_t>> by_head;
  for (std::size_t su = 0; su < cfg.sus.size(); ++su) by_head[cfg.sus[su].cluster_head].push_back(su);

  const auto all_obs = observations(data.sequences);
  std::vector<StickyHmmFit> fits;
  std::vector<std::size_t> su_order;
  for (const auto& [head, members] : by_head) {
    std::vector<ObservationSequence> obs;
    for (std::size_t su : members) {
      obs.push_back(all_obs[su]);
      su_order.push_back(su);
    }
    fits.push_back(fit_sticky_hmm(obs, options.hmm, rng));
    log().debug("build_spectrum_map: cluster head {} -> {} states", head, fits.back().k_active());
  }

  MappingResult out;
  out.fused = fuse_cluster_heads(fits, options.merge_tol);
  out.diagnostics = out.fused.diagnostics;
  out.labels.resize(cfg.sus.size());
  for (std::size_t r = 0; r < su_order.size(); ++r) out.labels[su_order[r]] = out.fused.labels[r];
  out.occupancy = state_occupancy(out.fused, cfg.noise_var, options.occupancy_margin);

  out.map.area = cfg.area;
  out.map.n_channels = data.n_channels;
  for (std::size_t s = 0; s < out.occupancy.size(); ++s) out.map.states.push_back({s, out.occupancy[s]});
  for (std::size_t c = 0; c < data.n_channels; ++c) {
    std::vector<Point> pts;
    for (std::size_t su = 0; su < data.sequences.size(); ++su)
      for (std::size_t t = 0; t < data.sequences[su].size(); ++t)
        if ((out.occupancy[out.labels[su][t]] >> c) & 1U) pts.push_back(data.sequences[su][t].location);
    if (pts.size() < 2) {
      if (!pts.empty()) out.diagnostics.push_back(fmt::format("channel {}: one occupied sample, no circle placed", c));
      continue;
    }
    out.map.circles.push_back(estimate_coverage(pts, c));
  }
  return out;
}

}  // namespace sir::mapping

namespace sir::mapping {

void write_map_toml(std::ostream& out, const SpectrumMap& map) {
  toml::Json root = toml::Json::object();
  root["n_channels"] = map.n_channels;
  root["area"] = {map.area.width, map.area.height};
  root["states"] = toml::Json::array();
  root["occupancy"] = toml::Json::array();
  for (const auto& s : map.states) {
    root["states"].push_back(s.label);
    root["occupancy"].push_back(rf::occupancy_string(s.occupancy, map.n_channels));
  }
  toml::Json circles = toml::Json::array();
  for (const auto& c : map.circles)
    circles.push_back({{"x", c.circle.center.x}, {"y", c.circle.center.y}, {"radius", c.circle.radius}, {"channel", c.channel}});
  if (!circles.empty()) root["circles"] = circles;
  out << toml::dump(root);
}

SpectrumMap read_map_toml(std::istream& in, const std::string& source_name) {
  std::ostringstream ss;
  ss << in.rdbuf();
  const toml::Document doc = toml::parse(ss.str(), source_name);
  const auto& root = doc.root;
  auto fail = [&](const std::string& ptr, const std::string& msg) { throw ValidationError(doc.where(ptr, msg)); };
  for (const auto& [k, v] : root.items())
    if (k != "n_channels" && k != "area" && k != "states" && k != "occupancy" && k != "circles")
      fail("/" + k, fmt::format("unknown key '{}'", k));
  auto number = [&](const toml::Json& v, const std::string& ptr) {
    if (!v.is_number()) fail(ptr, "expected a number");
    return v.get<double>();
  };
  auto count = [&](const toml::Json& v, const std::string& ptr) {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(ptr, "expected a non-negative integer");
    return static_cast<std::size_t>(v.get<long long>());
  };

  SpectrumMap map;
  if (!root.contains("n_channels")) fail("", "missing key 'n_channels'");
  map.n_channels = count(root["n_channels"], "/n_channels");
  if (map.n_channels == 0 || map.n_channels > rf::kMaxChannels) fail("/n_channels", "must be in 1..64");
  if (!root.contains("area") || !root["area"].is_array() || root["area"].size() != 2)
    fail("/area", "'area' must be [width, height]");
  map.area = {number(root["area"][0], "/area/0"), number(root["area"][1], "/area/1")};
  if (!(map.area.width > 0 && map.area.height > 0)) fail("/area", "area dimensions must be positive");

  const toml::Json empty = toml::Json::array();
  const auto& states = root.contains("states") ? root["states"] : empty;
  const auto& occ = root.contains("occupancy") ? root["occupancy"] : empty;
  if (!states.is_array() || !occ.is_array() || states.size() != occ.size())
    fail("/occupancy", "'states' and 'occupancy' must be arrays of equal length");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string ptr = fmt::format("/occupancy/{}", i);
    if (!occ[i].is_string()) fail(ptr, "occupancy entries are '0'/'1' strings");
    const auto bits = occ[i].get<std::string>();
    if (bits.size() != map.n_channels) fail(ptr, "occupancy length differs from n_channels");
    rf::Occupancy o = 0;
    for (std::size_t c = 0; c < bits.size(); ++c) {
      if (bits[c] != '0' && bits[c] != '1') fail(ptr, "occupancy entries are '0'/'1' strings");
      if (bits[c] == '1') o |= rf::Occupancy{1} << c;
    }
    map.states.push_back({count(states[i], fmt::format("/states/{}", i)), o});
  }
  if (root.contains("circles")) {
    if (!root["circles"].is_array()) fail("/circles", "'circles' must be an array of tables");
    for (std::size_t i = 0; i < root["circles"].size(); ++i) {
      const auto& c = root["circles"][i];
      const std::string ptr = fmt::format("/circles/{}", i);
      if (!c.is_object()) fail(ptr, "circle entries must be tables");
      for (const auto& [k, v] : c.items())
        if (k != "x" && k != "y" && k != "radius" && k != "channel") fail(ptr + "/" + k, fmt::format("unknown key '{}'", k));
      for (const char* k : {"x", "y", "radius", "channel"})
        if (!c.contains(k)) fail(ptr, fmt::format("missing key '{}'", k));
      CoverageCircle cc;
      cc.circle.center = {number(c["x"], ptr + "/x"), number(c["y"], ptr + "/y")};
      cc.circle.radius = number(c["radius"], ptr + "/radius");
      cc.channel = count(c["channel"], ptr + "/channel");
      if (!(cc.circle.radius > 0)) fail(ptr + "/radius", "radius must be positive");
      if (!map.area.contains(cc.circle.center)) fail(ptr, "circle center lies outside the area");
      if (cc.channel >= map.n_channels) fail(ptr + "/channel", "channel not below n_channels");
      map.circles.push_back(cc);
    }
  }
  return map;
}

SpectrumMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("{}: cannot open file", path));
  return read_map_toml(in, path);
}

}  // namespace sir::mapping
