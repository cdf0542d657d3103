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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sir/access/env.hpp"
#include "sir/access/gp.hpp"
#include "sir/access/gprl.hpp"
#include "sir/access/nnq.hpp"

namespace sir::access {

enum class Method : std::uint8_t { kOptimal, kWhittle, kGprl, kNnq, kRandom };
inline constexpr std::array<Method, 4> kFig6Methods{Method::kOptimal, Method::kWhittle, Method::kGprl, Method::kNnq};

std::string_view method_name(Method m);

struct AccessConfig {
  std::size_t n_channels = 16;
  std::size_t n_subsets = 4;
  double p01 = 0.2;
  double p11 = 0.9;
  LearningSchedule schedule;
  std::size_t test_spans = 30;
  GpHypers gp;
  bool gp_per_action = false;
  NnqConfig nnq;
};

struct MethodOutcome {
  Method method = Method::kOptimal;
  double accuracy = 0.0;
  double agreement = 0.0;  ///< fraction of testing slots matching a genie-optimal action
  EpisodeTrace trace;      ///< testing slots (plus learning slots for learners)
};

struct AccessRun {
  std::vector<MethodOutcome> outcomes;
  std::vector<double> gprl_curve;
  std::vector<double> nnq_curve;
  std::size_t gp_dictionary = 0;

  const MethodOutcome& outcome(Method m) const;
};

/// Trains the learners on one channel partition, then evaluates every method
/// greedily over the same testing trajectory (actions never affect dynamics).
AccessRun run_access(const AccessConfig& cfg, std::uint64_t seed, const std::vector<Method>& methods = {
                         kFig6Methods.begin(), kFig6Methods.end()});

}  // namespace sir::access
