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

struct MeanShiftResult {
  std::vector<double> modes;             ///< ascending
  std::vector<std::size_t> assignments;  ///< nearest mode per sample
  double bandwidth = 0.0;
};

/// 1.06 * sd * n^(-1/5).
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian-kernel mean-shift ascent from every sample. Converged points closer
/// than bandwidth/2 are merged into one mode.
MeanShiftResult fit_meanshift(std::span<const double> samples, double bandwidth);

}  // namespace sir::perception
