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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sir/bench/config.hpp"
#include "sir/bench/result.hpp"
#include "sir/mapping/spectrum_map.hpp"
#include "sir/rf/dataset.hpp"

namespace sir::bench {

struct RunOptions {
  std::size_t jobs = 1;  ///< worker threads; each task is one (seed, sweep point)
};

/// Runs `tasks` independent jobs on up to `jobs` threads. Exceptions are
/// captured per task; the returned vector holds the message of each failed
/// task (empty string on success).
std::vector<std::string> run_tasks(std::size_t tasks, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// P_c of every fig3 method for one seed at one grid point. Keys: ccdpgmm,
/// emgmm, meanshift (configured prediction mode), the same with a
/// "_perwindow" suffix, and known.
std::map<std::string, double> fig3_point(const BenchConfig& cfg, double gamma_db, std::uint64_t seed);

struct Fig5Seed {
  rf::MappingDataset data;
  mapping::MappingResult mapping;
  mapping::CoverageReport coverage;
  double query_accuracy = 0.0;
};

Fig5Seed fig5_seed(const BenchConfig& cfg, std::uint64_t seed);

/// Metric values for the fig5 summary: states, circles, radius_error_pct
/// (omitted without matches), query_accuracy.
std::map<std::string, double> fig5_metrics(const Fig5Seed& run);

BenchResult run_fig3(const BenchConfig& cfg, std::span<const std::uint64_t> seeds, const RunOptions& opt = {});
BenchResult run_fig5(const BenchConfig& cfg, std::span<const std::uint64_t> seeds, const RunOptions& opt = {});
/// Metrics "accuracy" (reward rate) and "agreement" (with a genie-optimal action).
BenchResult run_fig6(const BenchConfig& cfg, std::span<const std::uint64_t> seeds, const RunOptions& opt = {});

/// Minimum seed counts for the confidence-interval claims.
std::size_t min_seeds(Experiment e);

}  // namespace sir::bench
