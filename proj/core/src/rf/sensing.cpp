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

#include "sir/rf/sensing.hpp"

#include <cmath>
#include <random>

#include "sir/common/error.hpp"

namespace sir::rf {

double sense_window(double received_power, double noise_var, std::size_t n, Rng& rng) {
  require(n >= 1, "sense_window: n must be >= 1");
  require(noise_var > 0.0, "sense_window: noise_var must be > 0");
  require(received_power >= 0.0 && std::isfinite(received_power), "sense_window: received power must be >= 0");
  const double total = received_power + noise_var;
  std::gamma_distribution<double> energy(static_cast<double>(n), total / static_cast<double>(n));
  return energy(rng);
}

double received_power_at(const PuNode& pu, std::size_t level, Point location) {
  require(level < pu.power_levels.size(), "received_power_at: level out of range");
  return distance(location, pu.position) <= pu.coverage_radius ? pu.power_levels[level] : 0.0;
}

}  // namespace sir::rf
