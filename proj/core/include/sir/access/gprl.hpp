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
#include <utility>
#include <vector>

#include "sir/access/env.hpp"
#include "sir/access/gp.hpp"
#include "sir/access/nnq.hpp"
#include "sir/common/random.hpp"
#include "sir/rf/markov.hpp"

namespace sir::access {

struct LearningSchedule {
  std::size_t history = 8;
  std::size_t spans = 120;
  std::size_t span_len = 50;
  double discount = 0.9;
  double eps_start = 1.0;
  double eps_end = 0.02;

  std::size_t slots() const { return spans * span_len; }
  /// Linear decay from eps_start at the first slot to eps_end at the last.
  double epsilon(std::size_t slot) const;
};

/// Epsilon-greedy over the GP posterior means of (history, action) features;
/// ties to the lowest index.
std::size_t gprl_act(const GpQModel& gp, const HistoryState& h, std::size_t n_channels, double epsilon, Rng& rng);

/// Q-learner backed by one shared GP over (history, action) features, or one
/// GP per action over history features.
class GprlAgent {
 public:
  GprlAgent(std::size_t n_channels, std::size_t history, GpHypers hypers, bool per_action = false);

  std::vector<double> q_values(const HistoryState& h) const;
  std::size_t act(const HistoryState& h, double epsilon, Rng& rng) const;
  /// One TD update toward reward + discount * max_a' Q(next, a').
  void learn(const HistoryState& h, std::size_t action, double reward, const HistoryState& next, double discount);

  bool per_action() const { return models_.size() > 1; }
  const GpQModel& model(std::size_t i = 0) const { return models_.at(i); }
  std::size_t n_channels() const { return n_channels_; }

 private:
  std::size_t n_channels_;
  std::size_t history_;
  std::vector<GpQModel> models_;
};

struct TrainingResult {
  EpisodeTrace trace;
  std::vector<double> curve;  ///< mean reward per span
};

/// Online epsilon-greedy Q-learning over schedule.slots() slots. The
/// environment advances with `env_rng`; exploration draws use `agent_rng`.
std::pair<GprlAgent, TrainingResult> gprl_train(rf::MarkovChannelSet env, const LearningSchedule& schedule,
                                                const GpHypers& hypers, Rng& env_rng, Rng& agent_rng,
                                                bool per_action = false);

std::pair<NnqAgent, TrainingResult> nnq_train(rf::MarkovChannelSet env, const LearningSchedule& schedule,
                                              const NnqConfig& cfg, Rng& env_rng, Rng& agent_rng);

/// Greedy action of a trained network for the current history.
std::size_t nnq_act(const NnqAgent& agent, const HistoryState& h, std::size_t n_channels, double epsilon, Rng& rng);

}  // namespace sir::access
