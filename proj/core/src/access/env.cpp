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

#include "sir/access/env.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "sir/common/error.hpp"

namespace sir::access {

StepResult env_step(rf::MarkovChannelSet& env, std::size_t action, Rng& rng) {
  if (action >= env.n_channels())
    throw InvalidArgument(fmt::format("env_step: action {} out of range (n_channels = {})", action, env.n_channels()));
  StepResult r;
  const bool idle = env.idle(action);
  r.observation = idle ? Obs::kIdle : Obs::kOccupied;
  r.reward = idle ? 1.0 : 0.0;
  env.step(rng);
  return r;
}

HistoryState::HistoryState(std::size_t length) : entries_(length) {}

void HistoryState::push(std::size_t action, Obs obs) {
  if (entries_.empty()) return;
  std::rotate(entries_.rbegin(), entries_.rbegin() + 1, entries_.rend());
  entries_.front() = {action, obs};
}

Eigen::VectorXd encode_window(const HistoryState& h, std::size_t n_channels) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.length() * n_channels));
  for (std::size_t i = 0; i < h.length(); ++i) {
    const auto& e = h[i];
    if (e.obs == Obs::kNone) continue;
    require(e.action < n_channels, "encode_window: history action out of range");
    v(static_cast<Eigen::Index>(i * n_channels + e.action)) = e.obs == Obs::kIdle ? 1.0 : -1.0;
  }
  return v;
}

Eigen::VectorXd encode_history(const HistoryState& h, std::size_t n_channels, std::size_t candidate) {
  require(candidate < n_channels, "encode_history: candidate action out of range");
  const auto window = static_cast<Eigen::Index>(h.length() * n_channels);
  Eigen::VectorXd v(window + static_cast<Eigen::Index>(n_channels));
  v.head(window) = encode_window(h, n_channels);
  v.tail(static_cast<Eigen::Index>(n_channels)).setZero();
  v(window + static_cast<Eigen::Index>(candidate)) = 1.0;
  return v;
}

double belief_update(double b, double p01, double p11, Obs obs) {
  require(b >= 0.0 && b <= 1.0, "belief_update: belief outside [0, 1]");
  switch (obs) {
    case Obs::kIdle: return p11;
    case Obs::kOccupied: return p01;
    case Obs::kNone: break;
  }
  return std::clamp(b * p11 + (1.0 - b) * p01, 0.0, 1.0);
}

double eval_accuracy(const EpisodeTrace& trace, Phase phase) {
  double hits = 0.0, n = 0.0;
  for (const auto& r : trace) {
    if (r.phase != phase) continue;
    n += 1.0;
    hits += r.idle ? 1.0 : 0.0;
  }
  if (n == 0.0) throw InvalidArgument("eval_accuracy: no slots in the requested phase");
  return hits / n;
}

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace) {
  out << "slot,phase,action,idle,reward\n";
  for (const auto& r : trace)
    out << fmt::format("{},{},{},{},{}\n", r.slot, r.phase == Phase::kLearning ? "learning" : "testing", r.action,
                       r.idle ? 1 : 0, r.reward);
}

}  // namespace sir::access
