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
#include <span>
#include <vector>

#include "sir/rf/markov.hpp"

namespace sir::access {

/// Whittle index of a two-state restless arm at belief `omega` (discount
/// beta < 1). Requires p11 >= p01.
double whittle_index(double omega, double p01, double p11, double beta);

/// Lowest channel of the arm with the largest Whittle index. `arm_channels[i]`
/// lists the channels of arm i; when empty, arm i is channel i. If p11 < p01
/// the myopic argmax-belief rule is used instead (logged once).
std::size_t whittle_act(std::span<const double> beliefs, double p01, double p11, double beta,
                        const std::vector<std::vector<std::size_t>>& arm_channels = {});

/// Genie policy: lowest-index channel of the subset with the highest idle belief.
std::size_t optimal_act(std::span<const double> subset_beliefs, const rf::MarkovChannelSet& channels);

}  // namespace sir::access
