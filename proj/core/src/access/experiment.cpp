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

#include "sir/access/experiment.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>

#include "sir/access/policies.hpp"
#include "sir/common/error.hpp"

namespace sir::access {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kOptimal: return "optimal";
    case Method::kWhittle: return "whittle";
    case Method::kGprl: return "gprl";
    case Method::kNnq: return "nnq";
    case Method::kRandom: return "random";
  }
  return "?";
}

const MethodOutcome& AccessRun::outcome(Method m) const {
  for (const auto& o : outcomes)
    if (o.method == m) return o;
  throw InvalidArgument("AccessRun: method was not evaluated");
}

namespace {

// Exact subset beliefs given the policy's own observations.
struct GenieBeliefs {
  const rf::MarkovChannelSet* env;
  std::vector<double> b;

  explicit GenieBeliefs(const rf::MarkovChannelSet& e)
      : env(&e), b(e.n_subsets(), rf::stationary_idle(e.p01(), e.p11())) {}

  void observe(std::size_t channel, Obs o) {
    const std::size_t s = env->subset_of(channel);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = belief_update(b[i], env->p01(), env->p11(), i == s ? o : Obs::kNone);
  }
  bool is_optimal(std::size_t channel) const {
    return b[env->subset_of(channel)] >= *std::max_element(b.begin(), b.end());
  }
};

}  // namespace

AccessRun run_access(const AccessConfig& cfg, std::uint64_t seed, const std::vector<Method>& methods) {
  require(cfg.n_subsets >= 1 && cfg.n_subsets <= cfg.n_channels, "run_access: need 1 <= subsets <= channels");
  require(cfg.test_spans > 0, "run_access: at least one testing span");
  Rng setup = make_rng(seed, 11);
  const rf::MarkovChannelSet learn_env =
      rf::make_markov_channel_set(cfg.n_channels, cfg.n_subsets, cfg.p01, cfg.p11, setup);
  std::vector<bool> test_init(cfg.n_subsets);
  const double pi = rf::stationary_idle(cfg.p01, cfg.p11);
  for (std::size_t s = 0; s < cfg.n_subsets; ++s) test_init[s] = uniform01(setup) < pi;
  const rf::MarkovChannelSet test_env(learn_env.assignment(), cfg.p01, cfg.p11, test_init);
  const std::size_t n = cfg.n_channels;
  const std::size_t test_slots = cfg.test_spans * cfg.schedule.span_len;

  AccessRun run;
  std::optional<GprlAgent> gprl;
  std::optional<NnqAgent> nnq;
  std::vector<TraceRow> gprl_learning, nnq_learning;
  auto wants = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
  if (wants(Method::kGprl)) {
    Rng env_rng = make_rng(seed, 12), agent_rng = make_rng(seed, 13);
    auto [agent, res] = gprl_train(learn_env, cfg.schedule, cfg.gp, env_rng, agent_rng, cfg.gp_per_action);
    run.gprl_curve = res.curve;
    gprl_learning = std::move(res.trace);
    run.gp_dictionary = agent.model().size();
    gprl.emplace(std::move(agent));
  }
  if (wants(Method::kNnq)) {
    Rng env_rng = make_rng(seed, 12), agent_rng = make_rng(seed, 14);
    auto [agent, res] = nnq_train(learn_env, cfg.schedule, cfg.nnq, env_rng, agent_rng);
    run.nnq_curve = res.curve;
    nnq_learning = std::move(res.trace);
    nnq.emplace(std::move(agent));
  }

  for (std::size_t m = 0; m < methods.size(); ++m) {
    const Method method = methods[m];
    rf::MarkovChannelSet env = test_env;
    Rng env_rng = make_rng(seed, 15);
    Rng policy_rng = make_rng(seed, 16);
    GenieBeliefs genie(env);
    std::vector<double> channel_beliefs(n, pi);
    HistoryState h(cfg.schedule.history);
    MethodOutcome out;
    out.method = method;
    if (method == Method::kGprl) out.trace = gprl_learning;
    if (method == Method::kNnq) out.trace = nnq_learning;
    double hits = 0.0, agree = 0.0;
    for (std::size_t t = 0; t < test_slots; ++t) {
      std::size_t a = 0;
      switch (method) {
        case Method::kOptimal: a = optimal_act(genie.b, env); break;
        case Method::kWhittle:
          a = whittle_act(channel_beliefs, cfg.p01, cfg.p11, cfg.schedule.discount);
          break;
        case Method::kGprl: a = gprl->act(h, 0.0, policy_rng); break;
        case Method::kNnq: a = nnq_act(*nnq, h, n, 0.0, policy_rng); break;
        case Method::kRandom: a = std::uniform_int_distribution<std::size_t>(0, n - 1)(policy_rng); break;
      }
      if (genie.is_optimal(a)) agree += 1.0;
      const bool idle = env.idle(a);
      const StepResult r = env_step(env, a, env_rng);
      hits += r.reward;
      genie.observe(a, r.observation);
      for (std::size_t c = 0; c < n; ++c)
        channel_beliefs[c] = belief_update(channel_beliefs[c], cfg.p01, cfg.p11, c == a ? r.observation : Obs::kNone);
      h.push(a, r.observation);
      out.trace.push_back({t, Phase::kTesting, a, idle, r.reward});
    }
    out.accuracy = hits / static_cast<double>(test_slots);
    out.agreement = agree / static_cast<double>(test_slots);
    run.outcomes.push_back(std::move(out));
  }
  return run;
}

}  // namespace sir::access
