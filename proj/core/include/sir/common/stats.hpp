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

namespace sir {

double mean(std::span<const double> xs);

/// Biased (1/n) variance.
double variance_mle(std::span<const double> xs);

/// Unbiased (1/(n-1)) variance; zero for fewer than two values.
double variance_unbiased(std::span<const double> xs);

struct Summary {
  double mean = 0.0;
  double ci95 = 0.0;  ///< half-width, normal approximation over replicates
  std::size_t count = 0;
};

Summary summarize(std::span<const double> xs);

double log_sum_exp(std::span<const double> xs);

/// Upper-tail standard normal quantile Q^{-1}(p).
double inverse_q(double p);

/// Standard normal CDF.
double normal_cdf(double z);

double normal_log_pdf(double x, double mean, double variance);

}  // namespace sir
