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

#include <string>

#include "sir/bench/result.hpp"
#include "sir/mapping/spectrum_map.hpp"
#include "sir/rf/dataset.hpp"
#include "sir/rf/scenario.hpp"

namespace sir::bench {

/// Line plot of `metric` against the sweep value: one polyline and one
/// legend entry per method, whiskers for ci95. Aborted points break the
/// line. Fixed 640x420 canvas; identical input gives identical bytes.
std::string render_svg(const BenchResult& result, const std::string& metric);

/// Map overview: sensing locations coloured by fused state label, true
/// coverage circles solid, estimated circles dashed.
std::string render_map_svg(const rf::ScenarioConfig& cfg, const rf::MappingDataset& data,
                           const mapping::MappingResult& mapping);

}  // namespace sir::bench
