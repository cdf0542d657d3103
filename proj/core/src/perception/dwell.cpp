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

#include "sir/perception/dwell.hpp"

#include "sir/common/error.hpp"

namespace sir::perception {

DwellModel infer_dwell(std::span<const std::size_t> assignments, std::size_t levels) {
  require(!assignments.empty(), "infer_dwell: empty assignment sequence");
  std::vector<double> stays(levels, 0.0), slots(levels, 0.0);
  for (std::size_t t = 0; t < assignments.size(); ++t) {
    const std::size_t l = assignments[t];
    require(l < levels, "infer_dwell: assignment out of range");
    slots[l] += 1.0;
    if (t + 1 < assignments.size() && assignments[t + 1] == l) stays[l] += 1.0;
  }
  DwellModel model;
  for (std::size_t l = 0; l < levels; ++l) {
    const double q = slots[l] > 0 ? stays[l] / slots[l] : 0.0;
    model.continuation.push_back(q);
    model.mean_dwell.push_back(1.0 / (1.0 - q));
  }
  return model;
}

}  // namespace sir::perception
