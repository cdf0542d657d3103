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

#include "sir/access/policies.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sir/common/error.hpp"
#include "sir/common/log.hpp"
#include "sir/rf/markov.hpp"

namespace sir::access {

double whittle_index(double omega, double p01, double p11, double beta) {
  require(omega >= 0.0 && omega <= 1.0, "whittle_index: belief outside [0, 1]");
  require(beta >= 0.0 && beta < 1.0, "whittle_index: discount must be in [0, 1)");
  require(p11 >= p01, "whittle_index: closed form needs p11 >= p01");
  if (omega <= p01 || omega >= p11) return omega;
  const double omega_o = rf::stationary_idle(p01, p11);
  if (omega >= omega_o) return omega / (1.0 - beta * p11 + beta * omega);

  // Below the stationary belief the passive arm drifts up and is activated
  // once T^k(p01) exceeds omega. Unknowns: V(p11), V(p01), subsidy m.
  auto next = [&](double w) { return w * p11 + (1.0 - w) * p01; };
  std::size_t l0 = 0;
  double t0 = p01;
  while (!(t0 > omega)) {
    const double t1 = next(t0);
    // Rounding can park the drift just below omega; that is the omega_o limit.
    if (!(t1 > t0) || l0 > 100000) return omega / (1.0 - beta * p11 + beta * omega);
    t0 = t1;
    ++l0;
  }
  const double bl = std::pow(beta, static_cast<double>(l0));
  const double t = next(omega);
  Eigen::Matrix3d a;
  Eigen::Vector3d rhs;
  a << 1.0 - beta * p11, -beta * (1.0 - p11), 0.0,  //
      -bl * beta * t0, 1.0 - bl * beta * (1.0 - t0), -(1.0 - bl) / (1.0 - beta),  //
      beta * omega - beta * beta * t, beta * (1.0 - omega) - beta * beta * (1.0 - t), -1.0;
  rhs << p11, bl * t0, beta * t - omega;
  const Eigen::Vector3d x = a.fullPivLu().solve(rhs);
  return x(2);
}

std::size_t whittle_act(std::span<const double> beliefs, double p01, double p11, double beta,
                        const std::vector<std::vector<std::size_t>>& arm_channels) {
  require(!beliefs.empty(), "whittle_act: no arms");
  require(arm_channels.empty() || arm_channels.size() == beliefs.size(), "whittle_act: arm/channel list mismatch");
  const bool myopic = p11 < p01;
  if (myopic) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) log().warn("whittle_act: p11 < p01, using the myopic rule");
  }
  auto lowest = [&](std::size_t arm) {
    if (arm_channels.empty()) return arm;
    require(!arm_channels[arm].empty(), "whittle_act: arm without channels");
    std::size_t c = arm_channels[arm].front();
    for (std::size_t x : arm_channels[arm]) c = std::min(c, x);
    return c;
  };
  std::size_t best_channel = std::numeric_limits<std::size_t>::max();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    const double w = myopic ? beliefs[i] : whittle_index(beliefs[i], p01, p11, beta);
    const std::size_t c = lowest(i);
    if (w > best || (w == best && c < best_channel)) {
      best = w;
      best_channel = c;
    }
  }
  return best_channel;
}

std::size_t optimal_act(std::span<const double> subset_beliefs, const rf::MarkovChannelSet& channels) {
  require(subset_beliefs.size() == channels.n_subsets(), "optimal_act: one belief per subset required");
  std::size_t best = 0;
  for (std::size_t c = 1; c < channels.n_channels(); ++c)
    if (subset_beliefs[channels.subset_of(c)] > subset_beliefs[channels.subset_of(best)]) best = c;
  return best;
}

}  // namespace sir::access
