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

#include "sir/common/geometry.hpp"
#include "sir/common/random.hpp"
#include "sir/rf/scenario.hpp"

namespace sir::rf {

/// Average received energy T = (1/n) sum |s_i + w_i|^2 over one sensing window.
///
/// Signal and noise are independent circularly-symmetric complex Gaussians, so
/// each |y_i|^2 is exponential with mean P + noise_var and T is drawn exactly
/// as Gamma(n, (P + noise_var) / n). E[T] = P + noise_var and
/// var[T] = (P + noise_var)^2 / n.
double sense_window(double received_power, double noise_var, std::size_t n, Rng& rng);

/// Disk coverage: P_level inside the (inclusive) coverage radius, else 0.
double received_power_at(const PuNode& pu, std::size_t level, Point location);

}  // namespace sir::rf
