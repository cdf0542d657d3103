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
#include <vector>

#include <Eigen/Dense>

#include "sir/common/random.hpp"

namespace sir::access {

/// Two hidden ReLU layers, linear output; trained with Adam on squared error
/// of the selected outputs.
class Mlp {
 public:
  Mlp(std::size_t inputs, std::size_t hidden, std::size_t outputs, Rng& rng);

  std::size_t inputs() const { return static_cast<std::size_t>(w1_.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(w3_.rows()); }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  /// Column-wise batch forward.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  /// Mean over the batch of 0.5 (out[action_j](x_j) - target_j)^2.
  double loss(const Eigen::MatrixXd& x, const std::vector<std::size_t>& actions, const Eigen::VectorXd& targets) const;

  /// One Adam step on that loss; returns the loss before the step.
  double train_step(const Eigen::MatrixXd& x, const std::vector<std::size_t>& actions, const Eigen::VectorXd& targets,
                    double learning_rate, double grad_clip = 10.0);

  void copy_weights_from(const Mlp& other);
  bool finite() const;

 private:
  Eigen::MatrixXd w1_, w2_, w3_;
  Eigen::VectorXd b1_, b2_, b3_;
  struct Moments {
    Eigen::MatrixXd w1, w2, w3;
    Eigen::VectorXd b1, b2, b3;
  };
  Moments m_, v_;
  std::size_t steps_ = 0;
};

struct NnqConfig {
  std::size_t hidden = 64;
  double learning_rate = 1e-3;
  std::size_t batch = 32;
  std::size_t replay_capacity = 5000;
  std::size_t target_period = 200;
  std::size_t warmup = 200;
};

/// Q-network over the history window, with uniform experience replay and a
/// periodically frozen target copy.
class NnqAgent {
 public:
  NnqAgent(std::size_t window_dim, std::size_t n_actions, NnqConfig cfg, Rng& rng);

  std::vector<double> q_values(const Eigen::VectorXd& window) const;
  /// Epsilon-greedy; ties to the lowest index.
  std::size_t act(const Eigen::VectorXd& window, double epsilon, Rng& rng) const;
  /// Stores the transition and, after warm-up, takes one gradient step.
  void observe(const Eigen::VectorXd& window, std::size_t action, double reward, const Eigen::VectorXd& next_window,
               double discount, Rng& rng);

  std::size_t reinitializations() const { return reinits_; }
  const Mlp& network() const { return online_; }

 private:
  struct Transition {
    Eigen::VectorXd s;
    std::size_t a;
    double r;
    Eigen::VectorXd s2;
  };
  std::size_t window_dim_, n_actions_;
  NnqConfig cfg_;
  Mlp online_, target_;
  std::vector<Transition> replay_;
  std::size_t next_slot_ = 0;
  std::size_t updates_ = 0;
  std::size_t reinits_ = 0;
  Rng init_rng_;
};

}  // namespace sir::access
