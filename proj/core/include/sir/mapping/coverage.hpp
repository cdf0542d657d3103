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

#include "sir/common/geometry.hpp"
#include "sir/rf/scenario.hpp"

namespace sir::mapping {

struct CoverageCircle {
  Circle circle;
  std::size_t channel = 0;
};

/// Smallest circle enclosing every point (randomized incremental construction
/// over a fixed shuffle, so the result does not depend on input order).
Circle enclosing_circle(std::span<const Point> points);

/// Enclosing circle of the locations labeled occupied on `channel`; needs >= 2 points.
CoverageCircle estimate_coverage(std::span<const Point> occupied_locations, std::size_t channel);

struct CoverageMatch {
  std::size_t pu = 0;
  std::size_t estimate = 0;
  double radius_error_pct = 0.0;
  double center_offset_km = 0.0;
};

struct CoverageReport {
  std::vector<CoverageMatch> matches;
  std::vector<std::size_t> unmatched_estimates;
  std::vector<std::size_t> unmatched_pus;

  /// Mean over matches; zero when nothing matched.
  double mean_radius_error_pct() const;
};

/// Each estimate is paired with the nearest unclaimed PU on its channel,
/// closest pairs first.
CoverageReport coverage_error(std::span<const CoverageCircle> estimates, std::span<const rf::PuNode> pus);

}  // namespace sir::mapping
