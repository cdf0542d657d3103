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
#include <vector>

#include "sir/mapping/sticky_hmm.hpp"
#include "sir/rf/dataset.hpp"

namespace sir::mapping {

/// max over channels of |mean_a - mean_b| / sqrt((var_a + var_b) / 2).
double state_distance(const StickyHmmFit& fit, std::size_t a, std::size_t b);

/// Pools per-cluster-head libraries, then repeatedly merges the closest pair of
/// states while their distance is below `merge_tol`. Label sequences are
/// concatenated in input order and relabeled to the merged library. Fusing an
/// already fused result leaves it unchanged.
StickyHmmFit fuse_cluster_heads(const std::vector<StickyHmmFit>& fits, double merge_tol = 1.0);

/// Bit c of state s set iff means[s][c] > noise_var + margin.
std::vector<rf::Occupancy> state_occupancy(const StickyHmmFit& fit, double noise_var, double margin);

}  // namespace sir::mapping
