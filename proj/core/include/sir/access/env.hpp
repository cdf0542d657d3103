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
#include <vector>

#include <Eigen/Dense>

#include "sir/common/random.hpp"
#include "sir/rf/markov.hpp"

namespace sir::access {

enum class Obs : std::uint8_t { kNone, kIdle, kOccupied };

struct StepResult {
  Obs observation = Obs::kNone;
  double reward = 0.0;
};

/// Senses `action` in the current slot (reward 1 iff idle), then advances every subset.
StepResult env_step(rf::MarkovChannelSet& env, std::size_t action, Rng& rng);

struct HistoryEntry {
  std::size_t action = 0;
  Obs obs = Obs::kNone;
};

/// The last M (action, observation) pairs, most recent first; padded with kNone.
class HistoryState {
 public:
  explicit HistoryState(std::size_t length);

  void push(std::size_t action, Obs obs);
  std::size_t length() const { return entries_.size(); }
  const HistoryEntry& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<HistoryEntry> entries_;
};

/// Window part: per slot, the one-hot of its action scaled by +1 (idle),
/// -1 (occupied) or 0 (none). Size M * n_channels.
Eigen::VectorXd encode_window(const HistoryState& h, std::size_t n_channels);

/// Window part followed by the one-hot of `candidate`. Size (M + 1) * n_channels.
Eigen::VectorXd encode_history(const HistoryState& h, std::size_t n_channels, std::size_t candidate);

/// Next-slot idle probability: p11 after idle, p01 after occupied, propagated otherwise.
double belief_update(double b, double p01, double p11, Obs obs);

enum class Phase : std::uint8_t { kLearning, kTesting };

struct TraceRow {
  std::size_t slot = 0;
  Phase phase = Phase::kLearning;
  std::size_t action = 0;
  bool idle = false;
  double reward = 0.0;
};

using EpisodeTrace = std::vector<TraceRow>;

/// Fraction of slots of `phase` in which the accessed channel was idle.
double eval_accuracy(const EpisodeTrace& trace, Phase phase = Phase::kTesting);

/// CSV `slot,phase,action,idle,reward`.
void write_trace_csv(std::ostream& out, const EpisodeTrace& trace);

}  // namespace sir::access
