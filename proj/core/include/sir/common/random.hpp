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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sir {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for (seed, stream). Distinct streams never share state.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t s = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Dirichlet draw via normalized gammas. Zero concentrations yield zero mass.
inline std::vector<double> sample_dirichlet(std::span<const double> concentration, Rng& rng) {
  std::vector<double> out(concentration.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (concentration[i] <= 0.0) continue;
    out[i] = std::gamma_distribution<double>(concentration[i], 1.0)(rng);
    total += out[i];
  }
  if (total <= 0.0) {
    // Every gamma underflowed; fall back to the largest concentration.
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
      if (concentration[i] > concentration[best]) best = i;
    if (!out.empty()) out[best] = 1.0;
    return out;
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace sir
