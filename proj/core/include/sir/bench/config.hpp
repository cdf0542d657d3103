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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sir/access/experiment.hpp"
#include "sir/common/toml.hpp"
#include "sir/mapping/spectrum_map.hpp"
#include "sir/perception/dpgmm.hpp"
#include "sir/perception/gmm.hpp"
#include "sir/perception/predict.hpp"
#include "sir/rf/scenario.hpp"

namespace sir::bench {

enum class Experiment { kFig3, kFig5, kFig6 };

std::string_view experiment_name(Experiment e);

struct PerceptionParams {
  std::vector<double> gamma_db;  ///< sweep grid of the active-level SNR
  std::size_t windows = 4000;    ///< sensing windows for fitting, and again for scoring
  perception::PredictionMode mode = perception::PredictionMode::kDwellAware;
  perception::DpOptions dp;
  perception::EmOptions em;
};

struct MappingParams {
  mapping::MappingOptions options;
  std::size_t query_points = 1000;
};

struct AccessParams {
  access::AccessConfig base;
  std::vector<std::size_t> subsets;  ///< U grid
};

struct BenchConfig {
  Experiment experiment = Experiment::kFig6;
  rf::ScenarioConfig scenario;
  PerceptionParams perception;
  MappingParams mapping;
  AccessParams access;
  std::string source = "<defaults>";
};

/// Defaults for one experiment. fig5 starts from the reference three-PU
/// scenario; fig3 uses one four-level PU (powers 0:1:2:3, equal priors,
/// mean dwell 20 slots) and 20000 samples per window.
BenchConfig default_config(Experiment e);

/// Parses and validates a TOML config. Unknown keys, type errors and scenario
/// invariant violations raise ValidationError as "source:line: message".
BenchConfig parse_config(std::string_view text, const std::string& source = "<config>");
BenchConfig load_config(const std::string& path);

/// Power levels of the fig3 PU scaled so the mean of its non-zero levels is
/// 10^(gamma_db/10) * noise_var.
rf::PuNode fig3_pu(const BenchConfig& cfg, double gamma_db);

/// Effective parameters of the selected experiment, with keys sorted.
nlohmann::json effective_parameters(const BenchConfig& cfg);

}  // namespace sir::bench
