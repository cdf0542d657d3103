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

#include "sir/bench/result.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/common/stats.hpp"

#ifndef SIR_VERSION
#define SIR_VERSION "0.0.0"
#endif

namespace sir::bench {

std::string_view toolkit_version() { return SIR_VERSION; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::json RunManifest::to_json() const {
  return {{"config_hash", config_hash}, {"version", version}, {"seeds", seeds}, {"parameters", parameters}};
}

RunManifest make_manifest(const BenchConfig& cfg, std::vector<std::uint64_t> seeds) {
  RunManifest m;
  m.parameters = effective_parameters(cfg);
  // nlohmann::json keeps object keys sorted, so the dump is canonical.
  m.config_hash = fmt::format("{:016x}", fnv1a64(m.parameters.dump()));
  m.version = std::string(toolkit_version());
  m.seeds = std::move(seeds);
  return m;
}

const ResultRow* BenchResult::find(double sweep, const std::string& method, const std::string& metric) const {
  for (const auto& r : rows)
    if (r.sweep == sweep && r.method == method && r.metric == metric) return &r;
  return nullptr;
}

std::vector<std::string> BenchResult::methods(const std::string& metric) const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (r.metric == metric && std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  return out;
}

std::vector<ResultRow> aggregate(const std::vector<SeedValue>& values, const std::vector<RowKey>& keys,
                                 const std::vector<double>& aborted) {
  std::vector<ResultRow> rows;
  rows.reserve(keys.size());
  for (const auto& k : keys) {
    ResultRow r{k.sweep, k.method, k.metric, std::nullopt, 0.0, 0.0, 0};
    std::vector<double> xs;
    for (const auto& v : values)
      if (v.sweep == k.sweep && v.method == k.method && v.metric == k.metric) xs.push_back(v.value);
    r.n_seeds = xs.size();
    const bool dropped = std::find(aborted.begin(), aborted.end(), k.sweep) != aborted.end();
    if (!dropped && !xs.empty()) {
      const Summary s = summarize(xs);
      r.value = s.mean;
      r.ci95 = s.ci95;
      std::sort(xs.begin(), xs.end());
      const std::size_t n = xs.size();
      r.median = n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : "NA"; }

}  // namespace

void write_curve_csv(std::ostream& out, const BenchResult& result, const std::string& metric) {
  out << result.sweep_label << ",method," << metric << ",ci95\n";
  for (const auto& r : result.rows) {
    if (r.metric != metric) continue;
    out << fmt::format("{:g},{},{},{}\n", r.sweep, r.method, cell(r.value), r.value ? fmt::format("{:.6f}", r.ci95) : "NA");
  }
}

void write_summary_csv(std::ostream& out, const BenchResult& result) {
  out << "metric,mean,ci95,median,n_seeds\n";
  for (const auto& r : result.rows) {
    if (r.value) {
      out << fmt::format("{},{:.6f},{:.6f},{:.6f},{}\n", r.metric, *r.value, r.ci95, r.median, r.n_seeds);
    } else {
      out << fmt::format("{},NA,NA,NA,{}\n", r.metric, r.n_seeds);
    }
  }
}

void write_seed_csv(std::ostream& out, const BenchResult& result) {
  out << "seed," << result.sweep_label << ",method,metric,value\n";
  for (const auto& v : result.per_seed)
    out << fmt::format("{},{:g},{},{},{:.6f}\n", v.seed, v.sweep, v.method, v.metric, v.value);
}

}  // namespace sir::bench
