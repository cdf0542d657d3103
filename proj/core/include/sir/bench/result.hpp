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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sir/bench/config.hpp"

namespace sir::bench {

/// Toolkit version stamped into manifests.
std::string_view toolkit_version();

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

struct RunManifest {
  std::string config_hash;  ///< 16 hex digits over the canonical parameter dump
  std::string version;
  std::vector<std::uint64_t> seeds;
  nlohmann::json parameters;  ///< effective parameters, keys sorted

  nlohmann::json to_json() const;
};

RunManifest make_manifest(const BenchConfig& cfg, std::vector<std::uint64_t> seeds);

struct ResultRow {
  double sweep = 0.0;
  std::string method;
  std::string metric;
  std::optional<double> value;  ///< mean over seeds; empty when the point was aborted
  double ci95 = 0.0;
  double median = 0.0;
  std::size_t n_seeds = 0;
};

struct SeedValue {
  std::uint64_t seed = 0;
  double sweep = 0.0;
  std::string method;
  std::string metric;
  double value = 0.0;
};

struct BenchResult {
  Experiment experiment = Experiment::kFig6;
  std::string sweep_label;  ///< first CSV column, e.g. "gamma_st_db" or "u"
  std::vector<ResultRow> rows;
  std::vector<SeedValue> per_seed;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> failures;  ///< one line per aborted sweep point
  double wall_seconds = 0.0;
  RunManifest manifest;

  const ResultRow* find(double sweep, const std::string& method, const std::string& metric) const;
  /// Methods in order of first appearance among rows of `metric`.
  std::vector<std::string> methods(const std::string& metric) const;
};

struct RowKey {
  double sweep = 0.0;
  std::string method;
  std::string metric;
};

/// One row per key, in key order, summarizing the matching per-seed values.
/// Keys whose sweep value is in `aborted` or that have no values carry none.
std::vector<ResultRow> aggregate(const std::vector<SeedValue>& values, const std::vector<RowKey>& keys,
                                 const std::vector<double>& aborted = {});

/// `<sweep_label>,method,<metric>,ci95`; aborted rows carry NA.
void write_curve_csv(std::ostream& out, const BenchResult& result, const std::string& metric);
/// `metric,mean,ci95,median,n_seeds`, one line per metric.
void write_summary_csv(std::ostream& out, const BenchResult& result);
/// `seed,<sweep_label>,method,metric,value`.
void write_seed_csv(std::ostream& out, const BenchResult& result);

}  // namespace sir::bench
