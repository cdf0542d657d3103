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

#include "sir/bench/config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/rf/dataset.hpp"

namespace sir::bench {

namespace {

using Json = toml::Json;

// Typed access to one table; every read marks the key as known so that
// finish() can reject the rest.
class Section {
 public:
  Section(const toml::Document& doc, const Json& obj, std::string ptr)
      : doc_(doc), obj_(obj), ptr_(std::move(ptr)) {
    if (!obj_.is_object()) fail_at(ptr_, "expected a table");
  }

  [[noreturn]] void fail_at(const std::string& ptr, const std::string& msg) const {
    throw ValidationError(doc_.where(ptr, msg));
  }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const { fail_at(at(key), msg); }

  std::string at(const std::string& key) const { return ptr_ + "/" + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number()) fail(key, fmt::format("'{}' must be a number", key));
    return v.get<double>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      fail(key, fmt::format("'{}' must be a non-negative integer", key));
    return static_cast<std::size_t>(v.get<long long>());
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "'seed' must be a non-negative integer");
    return static_cast<std::uint64_t>(v.get<long long>());
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) fail(key, fmt::format("'{}' must be true or false", key));
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_string()) fail(key, fmt::format("'{}' must be a string", key));
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_array()) fail(key, fmt::format("'{}' must be an array of numbers", key));
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail_at(fmt::format("{}/{}", at(key), i), fmt::format("'{}' must be an array of numbers", key));
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key, std::vector<std::size_t> fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_array()) fail(key, fmt::format("'{}' must be an array of integers", key));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<long long>() < 0)
        fail_at(fmt::format("{}/{}", at(key), i), fmt::format("'{}' must be an array of non-negative integers", key));
      out.push_back(static_cast<std::size_t>(v[i].get<long long>()));
    }
    return out;
  }

  Point point(const std::string& key) {
    if (!has(key)) fail_at(ptr_, fmt::format("missing key '{}'", key));
    const auto xy = numbers(key, {});
    if (xy.size() != 2) fail(key, fmt::format("'{}' must be [x, y]", key));
    return {xy[0], xy[1]};
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items())
      if (!seen_.count(k)) fail(k, fmt::format("unknown key '{}'", k));
  }

 private:
  const toml::Document& doc_;
  const Json& obj_;
  std::string ptr_;
  std::set<std::string> seen_;
};

rf::PuNode default_fig3_pu() {
  rf::PuNode pu;
  pu.position = {6.0, 6.0};
  pu.power_levels = {0.0, 1.0, 2.0, 3.0};
  pu.level_priors = {0.25, 0.25, 0.25, 0.25};
  pu.mean_dwell = 20.0;
  return pu;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> g;
  for (int db = -16; db <= 0; db += 2) g.push_back(db);
  return g;
}

// "pus[1].level_priors" -> "/pus/1/level_priors"
std::string field_pointer(const std::string& field) {
  static const std::regex indexed(R"(\[(\d+)\]\.?)");
  std::string p = "/" + std::regex_replace(field, indexed, "/$1/");
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  if (p == "/area_km") return "/width";
  return p;
}

void read_scenario(Section& top, const toml::Document& doc, BenchConfig& cfg) {
  auto& sc = cfg.scenario;
  sc.seed = top.seed("seed", sc.seed);
  sc.n_channels = top.count("n_channels", sc.n_channels);
  sc.noise_var = top.number("noise_var", sc.noise_var);
  sc.samples_per_window = top.count("samples_per_window", sc.samples_per_window);
  sc.slot_duration = top.number("slot_duration", sc.slot_duration);
  sc.area.width = top.number("width", sc.area.width);
  sc.area.height = top.number("height", sc.area.height);

  const bool has_pus = top.has("pus"), has_sus = top.has("sus");
  if (!has_pus && !has_sus) return;
  sc.pus.clear();
  sc.sus.clear();
  auto table_array = [&](const char* key) -> const Json& {
    const auto& arr = top.raw(key);
    if (!arr.is_array()) top.fail(key, fmt::format("'{}' must be an array of tables ([[{}]])", key, key));
    return arr;
  };
  if (has_pus) {
    const auto& arr = table_array("pus");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section s(doc, arr[i], fmt::format("/pus/{}", i));
      rf::PuNode pu;
      pu.position = s.point("position");
      pu.coverage_radius = s.number("coverage_radius", pu.coverage_radius);
      pu.channel = s.count("channel", pu.channel);
      if (!s.has("power_levels")) s.fail_at(fmt::format("/pus/{}", i), "missing key 'power_levels'");
      pu.power_levels = s.numbers("power_levels", {});
      const double uniform = pu.power_levels.empty() ? 0.0 : 1.0 / static_cast<double>(pu.power_levels.size());
      pu.level_priors = s.numbers("level_priors", std::vector<double>(pu.power_levels.size(), uniform));
      pu.mean_dwell = s.number("mean_dwell", pu.mean_dwell);
      s.finish();
      sc.pus.push_back(std::move(pu));
    }
  }
  if (has_sus) {
    const auto& arr = table_array("sus");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section s(doc, arr[i], fmt::format("/sus/{}", i));
      rf::SuTrack su;
      su.start = s.point("start");
      su.end = s.point("end");
      su.n_samples = s.count("n_samples", 200);
      su.cluster_head = s.count("cluster_head", su.cluster_head);
      s.finish();
      sc.sus.push_back(su);
    }
  }
}

perception::PredictionMode parse_mode(Section& s) {
  const auto m = s.text("mode", "dwell_aware");
  if (m == "dwell_aware") return perception::PredictionMode::kDwellAware;
  if (m == "per_window") return perception::PredictionMode::kPerWindow;
  s.fail("mode", "'mode' must be \"dwell_aware\" or \"per_window\"");
}

void read_perception(Section& s, PerceptionParams& p) {
  p.gamma_db = s.numbers("gamma_db", p.gamma_db);
  p.windows = s.count("windows", p.windows);
  p.mode = parse_mode(s);
  p.dp.sweeps = s.count("dp_sweeps", p.dp.sweeps);
  p.dp.burn_in = s.count("dp_burn_in", p.dp.burn_in);
  p.dp.split_merge_moves = s.count("dp_split_merge", p.dp.split_merge_moves);
  p.dp.init_clusters = s.count("dp_init_clusters", p.dp.init_clusters);
  p.dp.prune_weight = s.number("dp_prune_weight", p.dp.prune_weight);
  p.em.restarts = s.count("em_restarts", p.em.restarts);
  p.em.max_iters = s.count("em_max_iters", p.em.max_iters);
  if (p.gamma_db.empty()) s.fail("gamma_db", "'gamma_db' must not be empty");
  for (double g : p.gamma_db)
    if (!std::isfinite(g)) s.fail("gamma_db", "'gamma_db' entries must be finite");
  if (p.windows < 10) s.fail("windows", "'windows' must be >= 10");
  if (p.dp.burn_in >= p.dp.sweeps) s.fail("dp_burn_in", "'dp_burn_in' must be below 'dp_sweeps'");
  if (!(p.dp.prune_weight >= 0.0 && p.dp.prune_weight < 1.0)) s.fail("dp_prune_weight", "must be in [0, 1)");
  if (p.em.restarts < 1) s.fail("em_restarts", "'em_restarts' must be >= 1");
  s.finish();
}

void read_mapping(Section& s, MappingParams& p) {
  auto& h = p.options.hmm;
  h.k_max = s.count("k_max", h.k_max);
  h.sweeps = s.count("sweeps", h.sweeps);
  h.burn_in = s.count("burn_in", h.burn_in);
  h.hypers.gamma = s.number("gamma", h.hypers.gamma);
  h.hypers.alpha = s.number("alpha", h.hypers.alpha);
  h.hypers.kappa = s.number("kappa", h.hypers.kappa);
  p.options.merge_tol = s.number("merge_tol", p.options.merge_tol);
  p.options.occupancy_margin = s.number("occupancy_margin", p.options.occupancy_margin);
  p.query_points = s.count("query_points", p.query_points);
  if (h.k_max < 1) s.fail("k_max", "'k_max' must be >= 1");
  if (h.burn_in >= h.sweeps) s.fail("burn_in", "'burn_in' must be below 'sweeps'");
  if (!(h.hypers.gamma > 0 && h.hypers.alpha > 0 && h.hypers.kappa >= 0))
    s.fail("kappa", "gamma and alpha must be > 0, kappa >= 0");
  if (!(p.options.merge_tol > 0)) s.fail("merge_tol", "'merge_tol' must be > 0");
  if (p.query_points < 1) s.fail("query_points", "'query_points' must be >= 1");
  s.finish();
}

void read_access(Section& s, AccessParams& p) {
  auto& a = p.base;
  p.subsets = s.counts("subsets", p.subsets);
  a.p01 = s.number("p01", a.p01);
  a.p11 = s.number("p11", a.p11);
  a.schedule.history = s.count("history", a.schedule.history);
  a.schedule.spans = s.count("spans", a.schedule.spans);
  a.schedule.span_len = s.count("span_len", a.schedule.span_len);
  a.schedule.discount = s.number("discount", a.schedule.discount);
  a.schedule.eps_start = s.number("eps_start", a.schedule.eps_start);
  a.schedule.eps_end = s.number("eps_end", a.schedule.eps_end);
  a.test_spans = s.count("test_spans", a.test_spans);
  a.gp.lengthscale = s.number("lengthscale", a.gp.lengthscale);
  a.gp.signal_var = s.number("signal_var", a.gp.signal_var);
  a.gp.noise = s.number("noise", a.gp.noise);
  a.gp.ald_tol = s.number("ald_tol", a.gp.ald_tol);
  a.gp.budget = s.count("budget", a.gp.budget);
  a.gp.step = s.number("gp_step", a.gp.step);
  a.gp_per_action = s.boolean("per_action", a.gp_per_action);
  a.nnq.hidden = s.count("nnq_hidden", a.nnq.hidden);
  a.nnq.learning_rate = s.number("nnq_learning_rate", a.nnq.learning_rate);
  a.nnq.batch = s.count("nnq_batch", a.nnq.batch);
  a.nnq.replay_capacity = s.count("nnq_replay", a.nnq.replay_capacity);
  a.nnq.target_period = s.count("nnq_target_period", a.nnq.target_period);
  a.nnq.warmup = s.count("nnq_warmup", a.nnq.warmup);

  if (p.subsets.empty()) s.fail("subsets", "'subsets' must not be empty");
  for (std::size_t u : p.subsets)
    if (u < 1 || u > a.n_channels) s.fail("subsets", fmt::format("subset counts must be in 1..{}", a.n_channels));
  for (const char* k : {"p01", "p11"}) {
    const double v = std::string(k) == "p01" ? a.p01 : a.p11;
    if (!(v >= 0.0 && v <= 1.0)) s.fail(k, fmt::format("'{}' must be in [0, 1]", k));
  }
  if (a.schedule.history < 1) s.fail("history", "'history' must be >= 1");
  if (a.schedule.spans < 1 || a.schedule.span_len < 1) s.fail("spans", "'spans' and 'span_len' must be >= 1");
  if (a.test_spans < 1) s.fail("test_spans", "'test_spans' must be >= 1");
  if (!(a.schedule.discount >= 0.0 && a.schedule.discount < 1.0)) s.fail("discount", "'discount' must be in [0, 1)");
  if (!(a.schedule.eps_start >= 0 && a.schedule.eps_start <= 1 && a.schedule.eps_end >= 0 && a.schedule.eps_end <= 1))
    s.fail("eps_end", "exploration rates must be in [0, 1]");
  if (!(a.gp.lengthscale > 0 && a.gp.signal_var > 0 && a.gp.noise > 0))
    s.fail("lengthscale", "lengthscale, signal_var and noise must be > 0");
  if (a.gp.ald_tol < 0) s.fail("ald_tol", "'ald_tol' must be >= 0");
  if (a.gp.budget < 1) s.fail("budget", "'budget' must be >= 1");
  if (!(a.gp.step > 0 && a.gp.step <= 1)) s.fail("gp_step", "'gp_step' must be in (0, 1]");
  if (a.nnq.hidden < 1 || a.nnq.batch < 1 || a.nnq.replay_capacity < a.nnq.batch || a.nnq.target_period < 1)
    s.fail("nnq_batch", "invalid neural baseline sizes");
  if (!(a.nnq.learning_rate > 0)) s.fail("nnq_learning_rate", "'nnq_learning_rate' must be > 0");
  s.finish();
}

nlohmann::json pu_json(const rf::PuNode& pu) {
  return {{"position", {pu.position.x, pu.position.y}}, {"coverage_radius", pu.coverage_radius},
          {"channel", pu.channel}, {"power_levels", pu.power_levels}, {"level_priors", pu.level_priors},
          {"mean_dwell", pu.mean_dwell}};
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kFig3: return "fig3";
    case Experiment::kFig5: return "fig5";
    case Experiment::kFig6: return "fig6";
  }
  return "?";
}

BenchConfig default_config(Experiment e) {
  BenchConfig cfg;
  cfg.experiment = e;
  cfg.perception.gamma_db = default_gamma_grid();
  cfg.access.subsets = {1, 2, 4, 8, 16};
  switch (e) {
    case Experiment::kFig3:
      cfg.scenario.pus = {default_fig3_pu()};
      cfg.scenario.samples_per_window = 20000;
      break;
    case Experiment::kFig5:
      cfg.scenario = rf::reference_mapping_scenario();
      break;
    case Experiment::kFig6:
      break;
  }
  return cfg;
}

BenchConfig parse_config(std::string_view text, const std::string& source) {
  const toml::Document doc = toml::parse(text, source);
  Section top(doc, doc.root, "");
  if (!top.has("experiment")) top.fail_at("", "missing key 'experiment'");
  const auto name = top.text("experiment", "");
  Experiment e;
  if (name == "fig3") {
    e = Experiment::kFig3;
  } else if (name == "fig5") {
    e = Experiment::kFig5;
  } else if (name == "fig6") {
    e = Experiment::kFig6;
  } else {
    top.fail("experiment", fmt::format("unknown experiment '{}' (expected fig3, fig5 or fig6)", name));
  }
  BenchConfig cfg = default_config(e);
  cfg.source = source;
  read_scenario(top, doc, cfg);
  if (e == Experiment::kFig6 && cfg.scenario.n_channels > 0) cfg.access.base.n_channels = cfg.scenario.n_channels;

  const Json empty = Json::object();
  auto section = [&](const char* key) {
    return top.has(key) ? Section(doc, doc.root.at(key), std::string("/") + key) : Section(doc, empty, std::string("/") + key);
  };
  {
    Section s = section("perception");
    read_perception(s, cfg.perception);
  }
  {
    Section s = section("mapping");
    read_mapping(s, cfg.mapping);
  }
  {
    Section s = section("access");
    read_access(s, cfg.access);
  }
  top.finish();

  try {
    rf::validate(cfg.scenario);
  } catch (const ValidationError& err) {
    const std::string what = err.what();
    const auto colon = what.find(':');
    const std::string field = colon == std::string::npos ? std::string() : what.substr(0, colon);
    throw ValidationError(doc.where(field_pointer(field), what));
  }
  if (e == Experiment::kFig3 && cfg.scenario.pus.size() != 1)
    throw ValidationError(doc.where("/pus", "fig3 expects exactly one [[pus]] entry"));
  if (e == Experiment::kFig3 && cfg.scenario.pus[0].power_levels.size() < 2)
    throw ValidationError(doc.where("/pus/0/power_levels", "fig3 needs at least two power levels"));
  if (e == Experiment::kFig5 && cfg.scenario.sus.empty())
    throw ValidationError(doc.where("/sus", "fig5 needs at least one [[sus]] track"));
  return cfg;
}

BenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("{}: cannot open file", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

rf::PuNode fig3_pu(const BenchConfig& cfg, double gamma_db) {
  require(!cfg.scenario.pus.empty(), "fig3_pu: no PU configured");
  rf::PuNode pu = cfg.scenario.pus.front();
  double active = 0.0;
  std::size_t n_active = 0;
  for (double p : pu.power_levels)
    if (p > 0.0) {
      active += p;
      ++n_active;
    }
  require(n_active > 0, "fig3_pu: the PU has no active level");
  const double scale = std::pow(10.0, gamma_db / 10.0) * cfg.scenario.noise_var / (active / static_cast<double>(n_active));
  for (double& p : pu.power_levels) p *= scale;
  return pu;
}

nlohmann::json effective_parameters(const BenchConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = std::string(experiment_name(cfg.experiment));
  const auto& sc = cfg.scenario;
  switch (cfg.experiment) {
    case Experiment::kFig3: {
      const auto& p = cfg.perception;
      j["noise_var"] = sc.noise_var;
      j["samples_per_window"] = sc.samples_per_window;
      j["pu"] = pu_json(sc.pus.front());
      j["perception"] = {{"gamma_db", p.gamma_db},
                         {"windows", p.windows},
                         {"mode", p.mode == perception::PredictionMode::kDwellAware ? "dwell_aware" : "per_window"},
                         {"dp_sweeps", p.dp.sweeps},
                         {"dp_burn_in", p.dp.burn_in},
                         {"dp_split_merge", p.dp.split_merge_moves},
                         {"dp_init_clusters", p.dp.init_clusters},
                         {"dp_prune_weight", p.dp.prune_weight},
                         {"dp_kappa0", p.dp.hypers.kappa0},
                         {"dp_a0", p.dp.hypers.a0},
                         {"dp_alpha_prior", {p.dp.hypers.alpha_shape, p.dp.hypers.alpha_rate}},
                         {"em_restarts", p.em.restarts},
                         {"em_max_iters", p.em.max_iters},
                         {"em_tolerance", p.em.tolerance}};
      break;
    }
    case Experiment::kFig5: {
      const auto& m = cfg.mapping;
      j["area"] = {sc.area.width, sc.area.height};
      j["noise_var"] = sc.noise_var;
      j["samples_per_window"] = sc.samples_per_window;
      j["n_channels"] = sc.channel_count();
      j["pus"] = nlohmann::json::array();
      for (const auto& pu : sc.pus) j["pus"].push_back(pu_json(pu));
      j["sus"] = nlohmann::json::array();
      for (const auto& su : sc.sus)
        j["sus"].push_back({{"start", {su.start.x, su.start.y}}, {"end", {su.end.x, su.end.y}},
                            {"n_samples", su.n_samples}, {"cluster_head", su.cluster_head}});
      j["mapping"] = {{"k_max", m.options.hmm.k_max},
                      {"sweeps", m.options.hmm.sweeps},
                      {"burn_in", m.options.hmm.burn_in},
                      {"gamma", m.options.hmm.hypers.gamma},
                      {"alpha", m.options.hmm.hypers.alpha},
                      {"kappa", m.options.hmm.hypers.kappa},
                      {"mean_kappa0", m.options.hmm.hypers.mean_kappa0},
                      {"var_a0", m.options.hmm.hypers.var_a0},
                      {"merge_tol", m.options.merge_tol},
                      {"occupancy_margin", m.options.occupancy_margin},
                      {"query_points", m.query_points}};
      break;
    }
    case Experiment::kFig6: {
      const auto& a = cfg.access.base;
      j["access"] = {{"subsets", cfg.access.subsets},
                     {"n_channels", a.n_channels},
                     {"p01", a.p01},
                     {"p11", a.p11},
                     {"history", a.schedule.history},
                     {"spans", a.schedule.spans},
                     {"span_len", a.schedule.span_len},
                     {"test_spans", a.test_spans},
                     {"discount", a.schedule.discount},
                     {"eps_start", a.schedule.eps_start},
                     {"eps_end", a.schedule.eps_end},
                     {"lengthscale", a.gp.lengthscale},
                     {"signal_var", a.gp.signal_var},
                     {"noise", a.gp.noise},
                     {"ald_tol", a.gp.ald_tol},
                     {"budget", a.gp.budget},
                     {"gp_step", a.gp.step},
                     {"per_action", a.gp_per_action},
                     {"nnq_hidden", a.nnq.hidden},
                     {"nnq_learning_rate", a.nnq.learning_rate},
                     {"nnq_batch", a.nnq.batch},
                     {"nnq_replay", a.nnq.replay_capacity},
                     {"nnq_target_period", a.nnq.target_period},
                     {"nnq_warmup", a.nnq.warmup}};
      break;
    }
  }
  return j;
}

}  // namespace sir::bench
