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
#include <iosfwd>
#include <string>
#include <span>
#include <vector>

#include "sir/perception/dpgmm.hpp"
#include "sir/perception/dwell.hpp"
#include "sir/perception/gmm.hpp"

namespace sir::perception {

struct LevelPrediction {
  std::size_t level = 0;
  std::vector<double> posterior;
};

enum class PredictionMode { kPerWindow, kDwellAware };

/// Posterior over levels for one window. With `dwell` and `prev`, the prior is
/// the one-step transition from the previous posterior: stay with the level's
/// continuation probability, otherwise renew according to the mixture weights.
/// The level is the posterior argmax, ties to the lower index.
LevelPrediction predict_level(const GmmFit& fit, double energy, const DwellModel* dwell = nullptr,
                              const LevelPrediction* prev = nullptr);
LevelPrediction predict_level(const DpFit& fit, double energy, const LevelPrediction* prev = nullptr);

/// Sequential Stage-II prediction over consecutive windows.
std::vector<LevelPrediction> predict_sequence(const GmmFit& fit, const DwellModel& dwell,
                                              std::span<const double> energies, PredictionMode mode);

/// Fraction of slots where the canonical predicted index equals the true level
/// index (levels sorted by power). Component counts need not agree.
double eval_pc(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

/// Stage-I fit as TOML: k, weights, means, variances, dwell_continuation.
std::string fit_toml(const GmmFit& fit, const DwellModel& dwell);

/// CSV `slot,true_level,pred_level,posterior0,...` with one posterior column
/// per component of the widest prediction.
void write_prediction_csv(std::ostream& out, std::span<const LevelPrediction> predictions,
                          std::span<const std::size_t> truth);

}  // namespace sir::perception
