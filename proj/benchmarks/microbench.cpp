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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "sir/access/gp.hpp"
#include "sir/access/policies.hpp"
#include "sir/mapping/coverage.hpp"
#include "sir/mapping/sticky_hmm.hpp"
#include "sir/perception/dpgmm.hpp"
#include "sir/perception/gmm.hpp"
#include "sir/perception/meanshift.hpp"
#include "sir/rf/dataset.hpp"
#include "sir/rf/power_process.hpp"
#include "sir/rf/sensing.hpp"

using namespace sir;

namespace {

std::vector<double> four_level_energies(std::size_t windows, double gamma_db) {
  rf::PuNode pu;
  const double p = std::pow(10.0, gamma_db / 10.0) / 2.0;
  pu.power_levels = {0.0, p, 2 * p, 3 * p};
  pu.level_priors = {0.25, 0.25, 0.25, 0.25};
  pu.mean_dwell = 20;
  Rng rng = make_rng(1);
  std::vector<double> e;
  for (auto l : rf::sample_power_process(pu, windows, rng)) e.push_back(rf::sense_window(pu.power_levels[l], 1.0, 500, rng));
  return e;
}

void BM_SenseWindow(benchmark::State& state) {
  Rng rng = make_rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rf::sense_window(1.0, 1.0, n, rng));
}
BENCHMARK(BM_SenseWindow)->Arg(500)->Arg(20000);

void BM_Ccdpgmm(benchmark::State& state) {
  const auto e = four_level_energies(static_cast<std::size_t>(state.range(0)), -6.0);
  perception::DpOptions opt;
  opt.sweeps = 50;
  opt.burn_in = 25;
  for (auto _ : state) {
    Rng rng = make_rng(3);
    benchmark::DoNotOptimize(perception::fit_ccdpgmm(e, opt, rng));
  }
}
BENCHMARK(BM_Ccdpgmm)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Emgmm(benchmark::State& state) {
  const auto e = four_level_energies(4000, -6.0);
  for (auto _ : state) {
    Rng rng = make_rng(4);
    benchmark::DoNotOptimize(perception::fit_emgmm(e, 4, perception::EmOptions{}, rng));
  }
}
BENCHMARK(BM_Emgmm)->Unit(benchmark::kMillisecond);

void BM_MeanShift(benchmark::State& state) {
  const auto e = four_level_energies(4000, -6.0);
  const double bw = perception::silverman_bandwidth(e);
  for (auto _ : state) benchmark::DoNotOptimize(perception::fit_meanshift(e, bw));
}
BENCHMARK(BM_MeanShift)->Unit(benchmark::kMillisecond);

void BM_EnclosingCircle(benchmark::State& state) {
  Rng rng = make_rng(5);
  std::vector<Point> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {12 * uniform01(rng), 12 * uniform01(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(mapping::enclosing_circle(pts));
}
BENCHMARK(BM_EnclosingCircle)->Arg(100)->Arg(2000);

void BM_StickyHmmReference(benchmark::State& state) {
  const auto cfg = rf::reference_mapping_scenario();
  Rng data_rng = make_rng(6);
  const auto data = rf::generate_mapping_dataset(cfg, data_rng);
  mapping::StickyHmmOptions opt;
  opt.sweeps = 50;
  opt.burn_in = 25;
  for (auto _ : state) {
    Rng rng = make_rng(7);
    benchmark::DoNotOptimize(mapping::fit_sticky_hmm(data.sequences, opt, rng));
  }
}
BENCHMARK(BM_StickyHmmReference)->Unit(benchmark::kMillisecond);

void BM_GpUpdatePredict(benchmark::State& state) {
  Rng rng = make_rng(8);
  access::GpQModel gp;
  Eigen::VectorXd x(144);
  for (auto _ : state) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = uniform01(rng) < 0.05 ? 1.0 : 0.0;
    gp.update(x, uniform01(rng));
    benchmark::DoNotOptimize(gp.predict(x));
  }
  state.counters["dictionary"] = static_cast<double>(gp.size());
}
BENCHMARK(BM_GpUpdatePredict);

void BM_WhittleIndex(benchmark::State& state) {
  double w = 0.21;
  for (auto _ : state) {
    benchmark::DoNotOptimize(access::whittle_index(w, 0.2, 0.9, 0.9));
    w = w > 0.89 ? 0.21 : w + 0.0137;
  }
}
BENCHMARK(BM_WhittleIndex);

}  // namespace
BENCHMARK_MAIN();
