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

// sir: command-line front end for the benchmark harness.
//
//   sir bench fig3|fig5|fig6 --config <path> --seeds <n|list> --out <dir> [--jobs K] [--svg]
//   sir simulate --config <path> --out <dir>
//   sir map query --map <path> --x <km> --y <km>
//
// Exit codes: 0 success, 2 validation error, 1 anything else.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sir/bench/config.hpp"
#include "sir/bench/experiments.hpp"
#include "sir/bench/result.hpp"
#include "sir/bench/svg.hpp"
#include "sir/common/error.hpp"
#include "sir/common/log.hpp"
#include "sir/mapping/spectrum_map.hpp"
#include "sir/rf/dataset.hpp"
#include "sir/rf/markov.hpp"
#include "sir/rf/power_process.hpp"
#include "sir/rf/sensing.hpp"

namespace fs = std::filesystem;
using namespace sir;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& arg, std::uint64_t base) {
  std::vector<std::uint64_t> seeds;
  auto parse_one = [&](const std::string& tok) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size() || tok[0] == '-')
      throw ValidationError(fmt::format("--seeds: '{}' is not a non-negative integer", tok));
    return static_cast<std::uint64_t>(v);
  };
  if (arg.find(',') == std::string::npos) {
    const auto n = parse_one(arg);
    if (n == 0) throw ValidationError("--seeds: count must be positive");
    for (std::uint64_t i = 0; i < n; ++i) seeds.push_back(base + i);
    return seeds;
  }
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) seeds.push_back(parse_one(tok));
  if (seeds.empty()) throw ValidationError("--seeds: empty list");
  return seeds;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << content;
}

template <typename F>
void write_with(const fs::path& path, F&& fn) {
  std::ostringstream ss;
  fn(ss);
  write_file(path, ss.str());
}

void write_manifest(const fs::path& dir, const bench::RunManifest& m) { write_file(dir / "manifest.json", m.to_json().dump(2) + "\n"); }

int run_bench(bench::Experiment which, const std::string& config, const std::string& seeds_spec, const std::string& out_dir,
              std::size_t jobs, bool svg) {
  const bench::BenchConfig cfg = bench::load_config(config);
  if (cfg.experiment != which)
    throw ValidationError(fmt::format("{}: config declares experiment '{}', not '{}'", config,
                                      bench::experiment_name(cfg.experiment), bench::experiment_name(which)));
  const auto seeds = parse_seeds(seeds_spec, cfg.scenario.seed);
  if (seeds.size() < bench::min_seeds(which))
    throw ValidationError(fmt::format("{} needs at least {} seeds, got {}", bench::experiment_name(which),
                                      bench::min_seeds(which), seeds.size()));
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const bench::RunOptions opt{jobs};
  const std::string name(bench::experiment_name(which));

  bench::BenchResult result;
  switch (which) {
    case bench::Experiment::kFig3:
      result = bench::run_fig3(cfg, seeds, opt);
      write_with(dir / "fig3.csv", [&](std::ostream& o) { bench::write_curve_csv(o, result, "pc"); });
      if (svg) write_file(dir / "fig3.svg", bench::render_svg(result, "pc"));
      break;
    case bench::Experiment::kFig5: {
      result = bench::run_fig5(cfg, seeds, opt);
      write_with(dir / "fig5.csv", [&](std::ostream& o) { bench::write_summary_csv(o, result); });
      // The map of the first seed is kept for `sir map query` and the overview.
      const bench::Fig5Seed first = bench::fig5_seed(cfg, seeds.front());
      write_with(dir / "map.toml", [&](std::ostream& o) { mapping::write_map_toml(o, first.mapping.map); });
      if (svg) write_file(dir / "fig5_map.svg", bench::render_map_svg(cfg.scenario, first.data, first.mapping));
      break;
    }
    case bench::Experiment::kFig6:
      result = bench::run_fig6(cfg, seeds, opt);
      write_with(dir / "fig6.csv", [&](std::ostream& o) { bench::write_curve_csv(o, result, "accuracy"); });
      write_with(dir / "fig6_agreement.csv", [&](std::ostream& o) { bench::write_curve_csv(o, result, "agreement"); });
      if (svg) write_file(dir / "fig6.svg", bench::render_svg(result, "accuracy"));
      break;
  }
  write_with(dir / (name + "_seeds.csv"), [&](std::ostream& o) { bench::write_seed_csv(o, result); });
  write_manifest(dir, result.manifest);

  std::cout << fmt::format("{}: {} seeds, {:.1f} s, config {}\n", name, seeds.size(), result.wall_seconds,
                           result.manifest.config_hash);
  for (const auto& f : result.failures) std::cerr << "aborted: " << f << "\n";
  return result.failures.empty() ? 0 : 1;
}

int run_simulate(const std::string& config, const std::string& out_dir) {
  const bench::BenchConfig cfg = bench::load_config(config);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const std::uint64_t seed = cfg.scenario.seed;
  switch (cfg.experiment) {
    case bench::Experiment::kFig3:
      write_with(dir / "energies.csv", [&](std::ostream& o) {
        o << "gamma_st_db,slot,level,power,energy\n";
        for (double g : cfg.perception.gamma_db) {
          const rf::PuNode pu = bench::fig3_pu(cfg, g);
          Rng rng = make_rng(seed, static_cast<std::uint64_t>(std::llround((g + 1000.0) * 1000.0)));
          const auto levels = rf::sample_power_process(pu, cfg.perception.windows, rng);
          for (std::size_t t = 0; t < levels.size(); ++t) {
            const double p = pu.power_levels[levels[t]];
            o << fmt::format("{:g},{},{},{:.9g},{:.9g}\n", g, t, levels[t], p,
                             rf::sense_window(p, cfg.scenario.noise_var, cfg.scenario.samples_per_window, rng));
          }
        }
      });
      break;
    case bench::Experiment::kFig5:
      write_with(dir / "dataset.csv", [&](std::ostream& o) {
        Rng rng = make_rng(seed, 5);
        rf::write_dataset_csv(o, rf::generate_mapping_dataset(cfg.scenario, rng));
      });
      break;
    case bench::Experiment::kFig6:
      write_with(dir / "channels.csv", [&](std::ostream& o) {
        const auto& a = cfg.access.base;
        o << "u,slot";
        for (std::size_t c = 0; c < a.n_channels; ++c) o << ",ch" << c;
        o << "\n";
        for (std::size_t u : cfg.access.subsets) {
          Rng rng = make_rng(seed, 11);
          auto env = rf::make_markov_channel_set(a.n_channels, u, a.p01, a.p11, rng);
          for (std::size_t t = 0; t < a.schedule.slots(); ++t) {
            o << u << "," << t;
            for (std::size_t c = 0; c < a.n_channels; ++c) o << "," << (env.idle(c) ? 1 : 0);
            o << "\n";
            env.step(rng);
          }
        }
      });
      break;
  }
  write_manifest(dir, bench::make_manifest(cfg, {seed}));
  std::cout << fmt::format("simulated {} into {}\n", bench::experiment_name(cfg.experiment), dir.string());
  return 0;
}

int run_query(const std::string& map_path, double x, double y) {
  const mapping::SpectrumMap map = mapping::load_map(map_path);
  if (!map.area.contains({x, y}))
    throw ValidationError(fmt::format("location ({:g}, {:g}) lies outside the {:g} x {:g} km area", x, y,
                                      map.area.width, map.area.height));
  const auto idle = mapping::query_spectrum(map, {x, y});
  std::cout << fmt::format("idle channels at ({:g}, {:g}): [{}]\n", x, y, fmt::join(idle, ", "));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum-intelligence benchmark toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bench::toolkit_version()));

  std::string config, out_dir, seeds = "20", map_path;
  std::size_t jobs = 1;
  bool svg = false;
  double x = 0, y = 0;
  bench::Experiment which = bench::Experiment::kFig6;

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark figure over seeds");
  bench_cmd->require_subcommand(1);
  for (auto e : {bench::Experiment::kFig3, bench::Experiment::kFig5, bench::Experiment::kFig6}) {
    auto* fig = bench_cmd->add_subcommand(std::string(bench::experiment_name(e)));
    fig->add_option("--config", config, "TOML config")->required();
    fig->add_option("--seeds", seeds, "seed count (from the config seed) or comma-separated list")->required();
    fig->add_option("--out", out_dir, "output directory")->required();
    fig->add_option("--jobs", jobs, "parallel seed jobs")->check(CLI::PositiveNumber);
    fig->add_flag("--svg", svg, "also render SVG figures");
    fig->callback([&which, e] { which = e; });
  }
  auto* sim_cmd = app.add_subcommand("simulate", "Dump the raw simulated data of a config");
  sim_cmd->add_option("--config", config, "TOML config")->required();
  sim_cmd->add_option("--out", out_dir, "output directory")->required();
  auto* map_cmd = app.add_subcommand("map", "Spectrum map utilities");
  map_cmd->require_subcommand(1);
  auto* query_cmd = map_cmd->add_subcommand("query", "Idle channels at a location");
  query_cmd->add_option("--map", map_path, "map TOML")->required();
  query_cmd->add_option("--x", x, "km")->required();
  query_cmd->add_option("--y", y, "km")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bench_cmd->parsed()) return run_bench(which, config, seeds, out_dir, jobs, svg);
    if (sim_cmd->parsed()) return run_simulate(config, out_dir);
    if (query_cmd->parsed()) return run_query(map_path, x, y);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
