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

#include "sir/access/gprl.hpp"

#include <algorithm>

#include "sir/common/error.hpp"

namespace sir::access {

namespace {

std::size_t argmax_low(const std::vector<double>& q) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a)
    if (q[a] > q[best]) best = a;
  return best;
}

std::size_t epsilon_greedy(const std::vector<double>& q, double epsilon, Rng& rng) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must be in [0, 1]");
  if (epsilon > 0.0 && uniform01(rng) < epsilon)
    return std::uniform_int_distribution<std::size_t>(0, q.size() - 1)(rng);
  return argmax_low(q);
}

template <typename Agent, typename Act, typename Learn>
TrainingResult run_learning(rf::MarkovChannelSet& env, const LearningSchedule& schedule, Rng& env_rng,
                            Act&& act, Learn&& learn) {
  require(schedule.spans > 0 && schedule.span_len > 0, "training needs at least one slot");
  TrainingResult out;
  HistoryState h(schedule.history);
  double span_sum = 0.0;
  for (std::size_t slot = 0; slot < schedule.slots(); ++slot) {
    const std::size_t a = act(h, schedule.epsilon(slot));
    const bool idle = env.idle(a);
    const StepResult r = env_step(env, a, env_rng);
    HistoryState next = h;
    next.push(a, r.observation);
    learn(h, a, r.reward, next);
    h = std::move(next);
    out.trace.push_back({slot, Phase::kLearning, a, idle, r.reward});
    span_sum += r.reward;
    if ((slot + 1) % schedule.span_len == 0) {
      out.curve.push_back(span_sum / static_cast<double>(schedule.span_len));
      span_sum = 0.0;
    }
  }
  return out;
}

}  // namespace

double LearningSchedule::epsilon(std::size_t slot) const {
  const std::size_t n = slots();
  if (n <= 1) return eps_end;
  const double f = std::min(1.0, static_cast<double>(slot) / static_cast<double>(n - 1));
  return eps_start + (eps_end - eps_start) * f;
}

std::size_t gprl_act(const GpQModel& gp, const HistoryState& h, std::size_t n_channels, double epsilon, Rng& rng) {
  return epsilon_greedy(gp.predict_actions(encode_window(h, n_channels), n_channels), epsilon, rng);
}

GprlAgent::GprlAgent(std::size_t n_channels, std::size_t history, GpHypers hypers, bool per_action)
    : n_channels_(n_channels), history_(history), models_(per_action ? n_channels : 1, GpQModel(hypers)) {
  require(n_channels >= 1, "GprlAgent: at least one channel");
}

std::vector<double> GprlAgent::q_values(const HistoryState& h) const {
  const Eigen::VectorXd w = encode_window(h, n_channels_);
  if (!per_action()) return models_.front().predict_actions(w, n_channels_);
  std::vector<double> q(n_channels_);
  for (std::size_t a = 0; a < n_channels_; ++a) q[a] = models_[a].predict(w).mean;
  return q;
}

std::size_t GprlAgent::act(const HistoryState& h, double epsilon, Rng& rng) const {
  return epsilon_greedy(q_values(h), epsilon, rng);
}

void GprlAgent::learn(const HistoryState& h, std::size_t action, double reward, const HistoryState& next,
                      double discount) {
  const auto q_next = q_values(next);
  const double target = reward + discount * *std::max_element(q_next.begin(), q_next.end());
  if (per_action()) {
    models_.at(action).update(encode_window(h, n_channels_), target);
  } else {
    models_.front().update(encode_history(h, n_channels_, action), target);
  }
}

std::pair<GprlAgent, TrainingResult> gprl_train(rf::MarkovChannelSet env, const LearningSchedule& schedule,
                                                const GpHypers& hypers, Rng& env_rng, Rng& agent_rng,
                                                bool per_action) {
  GprlAgent agent(env.n_channels(), schedule.history, hypers, per_action);
  auto result = run_learning<GprlAgent>(
      env, schedule, env_rng, [&](const HistoryState& h, double eps) { return agent.act(h, eps, agent_rng); },
      [&](const HistoryState& h, std::size_t a, double r, const HistoryState& next) {
        agent.learn(h, a, r, next, schedule.discount);
        for (std::size_t i = 0; i < (agent.per_action() ? env.n_channels() : 1); ++i)
          if (agent.model(i).size() > hypers.budget) throw NumericalError("gprl_train: dictionary exceeded its budget");
      });
  return {std::move(agent), std::move(result)};
}

std::pair<NnqAgent, TrainingResult> nnq_train(rf::MarkovChannelSet env, const LearningSchedule& schedule,
                                              const NnqConfig& cfg, Rng& env_rng, Rng& agent_rng) {
  const std::size_t n = env.n_channels();
  NnqAgent agent(schedule.history * n, n, cfg, agent_rng);
  auto result = run_learning<NnqAgent>(
      env, schedule, env_rng,
      [&](const HistoryState& h, double eps) { return agent.act(encode_window(h, n), eps, agent_rng); },
      [&](const HistoryState& h, std::size_t a, double r, const HistoryState& next) {
        agent.observe(encode_window(h, n), a, r, encode_window(next, n), schedule.discount, agent_rng);
      });
  return {std::move(agent), std::move(result)};
}

std::size_t nnq_act(const NnqAgent& agent, const HistoryState& h, std::size_t n_channels, double epsilon, Rng& rng) {
  return agent.act(encode_window(h, n_channels), epsilon, rng);
}

}  // namespace sir::access
