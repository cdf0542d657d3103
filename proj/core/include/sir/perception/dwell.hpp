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

namespace sir::perception {

/// Geometric dwell per level: probability of staying one more slot.
struct DwellModel {
  std::vector<double> continuation;
  std::vector<double> mean_dwell;  ///< 1 / (1 - continuation)

  std::size_t levels() const { return continuation.size(); }
};

/// Per-level continuation = within-run continuations / slots spent in runs of
/// that level. The final run is censored but counted at face value. Levels that
/// never occur get continuation 0 (mean dwell 1).
DwellModel infer_dwell(std::span<const std::size_t> assignments, std::size_t levels);

}  // namespace sir::perception
