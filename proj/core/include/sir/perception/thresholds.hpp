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
#include <optional>
#include <span>
#include <vector>

namespace sir::perception {

/// Neyman-Pearson energy threshold under the Gaussian approximation
/// T | H0 ~ N(noise_var, noise_var^2 / n).
double np_threshold(double pfa, double noise_var, std::size_t n);

/// MAP boundaries between adjacent hypotheses N(noise_var + P_l, (noise_var + P_l)^2 / n)
/// weighted by their priors. `powers` ascending and distinct. With
/// `common_variance` set, every hypothesis uses that variance instead.
std::vector<double> map_thresholds(std::span<const double> powers, std::span<const double> priors, double noise_var,
                                   std::size_t n, std::optional<double> common_variance = std::nullopt);

/// Level index = number of thresholds strictly below the energy.
std::size_t classify_by_thresholds(std::span<const double> thresholds, double energy);

}  // namespace sir::perception
