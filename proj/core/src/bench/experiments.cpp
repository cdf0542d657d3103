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

#include "sir/bench/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/common/log.hpp"
#include "sir/perception/dpgmm.hpp"
#include "sir/perception/gmm.hpp"
#include "sir/perception/meanshift.hpp"
#include "sir/perception/predict.hpp"
#include "sir/perception/thresholds.hpp"
#include "sir/rf/power_process.hpp"
#include "sir/rf/sensing.hpp"

namespace sir::bench {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Stream id of a fig3 grid point; depends on the value only, so a point gives
// the same numbers whatever grid it belongs to.
std::uint64_t fig3_stream(double gamma_db) {
  return 0x3000000ULL + static_cast<std::uint64_t>(std::llround((gamma_db + 1000.0) * 1000.0));
}

void check_seeds(std::span<const std::uint64_t> seeds, Experiment e) {
  if (seeds.size() < min_seeds(e))
    throw InvalidArgument(fmt::format("{} needs at least {} seeds, got {}", experiment_name(e), min_seeds(e), seeds.size()));
}

BenchResult start(const BenchConfig& cfg, Experiment e, std::span<const std::uint64_t> seeds, std::string sweep_label) {
  if (cfg.experiment != e)
    throw InvalidArgument(fmt::format("config is for {}, not {}", experiment_name(cfg.experiment), experiment_name(e)));
  check_seeds(seeds, e);
  BenchResult r;
  r.experiment = e;
  r.sweep_label = std::move(sweep_label);
  r.seeds.assign(seeds.begin(), seeds.end());
  r.manifest = make_manifest(cfg, r.seeds);
  return r;
}

const std::vector<std::string> kFig3Methods{"ccdpgmm",           "emgmm",          "meanshift",
                                             "ccdpgmm_perwindow", "emgmm_perwindow", "meanshift_perwindow",
                                             "known"};

}  // namespace

std::size_t min_seeds(Experiment e) {
  switch (e) {
    case Experiment::kFig3: return 5;
    case Experiment::kFig5: return 3;
    case Experiment::kFig6: return 20;
  }
  return 1;
}

std::vector<std::string> run_tasks(std::size_t tasks, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::string> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown error";
      }
    }
  };
  const std::size_t n = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(tasks, 1));
  if (n == 1) {
    worker();
    return errors;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return errors;
}

std::map<std::string, double> fig3_point(const BenchConfig& cfg, double gamma_db, std::uint64_t seed) {
  using namespace perception;
  const rf::PuNode pu = fig3_pu(cfg, gamma_db);
  const std::size_t levels = pu.level_count();
  const std::size_t n = cfg.scenario.samples_per_window;
  const double noise = cfg.scenario.noise_var;

  // Truth is scored as the rank of the level by power.
  std::vector<std::size_t> order(levels);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pu.power_levels[a] < pu.power_levels[b]; });
  std::vector<std::size_t> rank(levels);
  for (std::size_t r = 0; r < levels; ++r) rank[order[r]] = r;

  Rng rng = make_rng(seed, fig3_stream(gamma_db));
  auto simulate = [&](std::vector<double>& energies, std::vector<std::size_t>& truth) {
    const auto lv = rf::sample_power_process(pu, cfg.perception.windows, rng);
    energies.clear();
    truth.clear();
    for (std::size_t l : lv) {
      energies.push_back(rf::sense_window(pu.power_levels[l], noise, n, rng));
      truth.push_back(rank[l]);
    }
  };
  std::vector<double> train, test;
  std::vector<std::size_t> train_truth, test_truth;
  simulate(train, train_truth);
  simulate(test, test_truth);

  const DpFit dp = fit_ccdpgmm(train, cfg.perception.dp, rng);
  const GmmFit em = fit_emgmm(train, levels, cfg.perception.em, rng);
  std::vector<std::size_t> em_assign;
  em_assign.reserve(train.size());
  for (double x : train) em_assign.push_back(most_responsible(em, x));
  const DwellModel em_dwell = infer_dwell(em_assign, em.k());
  const MeanShiftResult ms = fit_meanshift(train, silverman_bandwidth(train));
  const GmmFit ms_gmm = gmm_from_assignments(train, ms.assignments, ms.modes.size(), 1e-12);
  const DwellModel ms_dwell = infer_dwell(ms.assignments, ms.modes.size());

  auto score = [&](const GmmFit& fit, const DwellModel& dwell, PredictionMode mode) {
    const auto pred = predict_sequence(fit, dwell, test, mode);
    std::vector<std::size_t> idx;
    idx.reserve(pred.size());
    for (const auto& p : pred) idx.push_back(p.level);
    return eval_pc(idx, test_truth);
  };
  std::map<std::string, double> out;
  const PredictionMode primary = cfg.perception.mode;
  out["ccdpgmm"] = score(dp.gmm, dp.dwell, primary);
  out["emgmm"] = score(em, em_dwell, primary);
  out["meanshift"] = score(ms_gmm, ms_dwell, primary);
  out["ccdpgmm_perwindow"] = score(dp.gmm, dp.dwell, PredictionMode::kPerWindow);
  out["emgmm_perwindow"] = score(em, em_dwell, PredictionMode::kPerWindow);
  out["meanshift_perwindow"] = score(ms_gmm, ms_dwell, PredictionMode::kPerWindow);

  std::vector<double> powers, priors;
  for (std::size_t i : order) {
    powers.push_back(pu.power_levels[i]);
    priors.push_back(pu.level_priors[i]);
  }
  const auto th = map_thresholds(powers, priors, noise, n);
  std::vector<std::size_t> known;
  known.reserve(test.size());
  for (double x : test) known.push_back(classify_by_thresholds(th, x));
  out["known"] = eval_pc(known, test_truth);
  return out;
}

BenchResult run_fig3(const BenchConfig& cfg, std::span<const std::uint64_t> seeds, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchResult r = start(cfg, Experiment::kFig3, seeds, "gamma_st_db");
  const auto& grid = cfg.perception.gamma_db;
  const std::size_t points = grid.size();
  std::vector<std::map<std::string, double>> out(points * seeds.size());
  const auto errors = run_tasks(out.size(), opt.jobs, [&](std::size_t i) {
    const double g = grid[i % points];
    const std::uint64_t seed = seeds[i / points];
    out[i] = fig3_point(cfg, g, seed);
    log().info("fig3: seed {} at {:g} dB done", seed, g);
  });

  std::vector<double> aborted;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double g = grid[i % points];
    if (!errors[i].empty()) {
      r.failures.push_back(fmt::format("gamma_st_db={:g} seed={}: {}", g, seeds[i / points], errors[i]));
      log().error("fig3: point {:g} dB aborted: {}", g, errors[i]);
      aborted.push_back(g);
      continue;
    }
    for (const auto& [m, v] : out[i]) r.per_seed.push_back({seeds[i / points], g, m, "pc", v});
  }
  std::vector<RowKey> keys;
  for (double g : grid)
    for (const auto& m : kFig3Methods) keys.push_back({g, m, "pc"});
  r.rows = aggregate(r.per_seed, keys, aborted);
  r.wall_seconds = seconds_since(t0);
  return r;
}

Fig5Seed fig5_seed(const BenchConfig& cfg, std::uint64_t seed) {
  Rng rng = make_rng(seed, 5);
  Fig5Seed run;
  run.data = rf::generate_mapping_dataset(cfg.scenario, rng);
  run.mapping = mapping::build_spectrum_map(cfg.scenario, run.data, cfg.mapping.options, rng);
  if (!run.mapping.map.circles.empty()) {
    run.coverage = mapping::coverage_error(run.mapping.map.circles, cfg.scenario.pus);
  } else {
    for (std::size_t i = 0; i < cfg.scenario.pus.size(); ++i) run.coverage.unmatched_pus.push_back(i);
  }
  Rng query_rng = make_rng(seed, 6);
  run.query_accuracy = mapping::query_accuracy(run.mapping.map, cfg.scenario, cfg.mapping.query_points, query_rng);
  return run;
}

std::map<std::string, double> fig5_metrics(const Fig5Seed& run) {
  std::map<std::string, double> m;
  m["states"] = static_cast<double>(run.mapping.fused.k_active());
  m["circles"] = static_cast<double>(run.mapping.map.circles.size());
  if (!run.coverage.matches.empty()) m["radius_error_pct"] = run.coverage.mean_radius_error_pct();
  m["query_accuracy"] = run.query_accuracy;
  return m;
}

BenchResult run_fig5(const BenchConfig& cfg, std::span<const std::uint64_t> seeds, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchResult r = start(cfg, Experiment::kFig5, seeds, "scenario");
  std::vector<std::map<std::string, double>> out(seeds.size());
  const auto errors = run_tasks(seeds.size(), opt.jobs, [&](std::size_t i) {
    out[i] = fig5_metrics(fig5_seed(cfg, seeds[i]));
    log().info("fig5: seed {} done", seeds[i]);
  });
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!errors[i].empty()) {
      r.failures.push_back(fmt::format("seed={}: {}", seeds[i], errors[i]));
      log().error("fig5: seed {} aborted: {}", seeds[i], errors[i]);
      continue;
    }
    for (const auto& [m, v] : out[i]) r.per_seed.push_back({seeds[i], 0.0, "sticky_hmm", m, v});
  }
  std::vector<RowKey> keys;
  for (const char* m : {"states", "circles", "radius_error_pct", "query_accuracy"}) keys.push_back({0.0, "sticky_hmm", m});
  // A failed seed aborts the whole summary rather than biasing it.
  r.rows = aggregate(r.per_seed, keys, r.failures.empty() ? std::vector<double>{} : std::vector<double>{0.0});
  r.wall_seconds = seconds_since(t0);
  return r;
}

BenchResult run_fig6(const BenchConfig& cfg, std::span<const std::uint64_t> seeds, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchResult r = start(cfg, Experiment::kFig6, seeds, "u");
  const auto& grid = cfg.access.subsets;
  const std::size_t points = grid.size();
  const std::vector<access::Method> methods(access::kFig6Methods.begin(), access::kFig6Methods.end());
  std::vector<access::AccessRun> out(points * seeds.size());
  const auto errors = run_tasks(out.size(), opt.jobs, [&](std::size_t i) {
    access::AccessConfig ac = cfg.access.base;
    ac.n_subsets = grid[i % points];
    out[i] = access::run_access(ac, seeds[i / points], methods);
    for (auto& o : out[i].outcomes) o.trace.clear();  // traces are not needed for the summary
    log().info("fig6: seed {} at U={} done", seeds[i / points], ac.n_subsets);
  });

  std::vector<double> aborted;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = static_cast<double>(grid[i % points]);
    if (!errors[i].empty()) {
      r.failures.push_back(fmt::format("u={} seed={}: {}", grid[i % points], seeds[i / points], errors[i]));
      log().error("fig6: U={} aborted: {}", grid[i % points], errors[i]);
      aborted.push_back(u);
      continue;
    }
    for (const auto& o : out[i].outcomes) {
      const std::string name(access::method_name(o.method));
      r.per_seed.push_back({seeds[i / points], u, name, "accuracy", o.accuracy});
      r.per_seed.push_back({seeds[i / points], u, name, "agreement", o.agreement});
    }
  }
  std::vector<RowKey> keys;
  for (const char* metric : {"accuracy", "agreement"})
    for (std::size_t u : grid)
      for (auto m : methods) keys.push_back({static_cast<double>(u), std::string(access::method_name(m)), metric});
  r.rows = aggregate(r.per_seed, keys, aborted);
  r.wall_seconds = seconds_since(t0);
  return r;
}

}  // namespace sir::bench
