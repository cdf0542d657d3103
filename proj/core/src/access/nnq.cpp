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

#include "sir/access/nnq.hpp"

#include <cmath>

#include "sir/common/error.hpp"
#include "sir/common/log.hpp"

namespace sir::access {

namespace {

using Index = Eigen::Index;

Eigen::MatrixXd he_init(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(2.0 / static_cast<double>(cols)));
  Eigen::MatrixXd w(rows, cols);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = n(rng);
  return w;
}

template <typename M>
void adam(M& param, M& m, M& v, const M& grad, double lr, double bc1, double bc2) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  m = b1 * m + (1.0 - b1) * grad;
  v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
  param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

}  // namespace

Mlp::Mlp(std::size_t inputs, std::size_t hidden, std::size_t outputs, Rng& rng) {
  require(inputs > 0 && hidden > 0 && outputs > 0, "Mlp: layer sizes must be positive");
  const auto in = static_cast<Index>(inputs), h = static_cast<Index>(hidden), out = static_cast<Index>(outputs);
  w1_ = he_init(h, in, rng);
  w2_ = he_init(h, h, rng);
  w3_ = he_init(out, h, rng) * 0.1;
  b1_ = Eigen::VectorXd::Zero(h);
  b2_ = Eigen::VectorXd::Zero(h);
  b3_ = Eigen::VectorXd::Zero(out);
  for (Moments* mo : {&m_, &v_}) {
    mo->w1 = Eigen::MatrixXd::Zero(h, in);
    mo->w2 = Eigen::MatrixXd::Zero(h, h);
    mo->w3 = Eigen::MatrixXd::Zero(out, h);
    mo->b1 = Eigen::VectorXd::Zero(h);
    mo->b2 = Eigen::VectorXd::Zero(h);
    mo->b3 = Eigen::VectorXd::Zero(out);
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd h1 = (w1_ * x + b1_).cwiseMax(0.0);
  const Eigen::VectorXd h2 = (w2_ * h1 + b2_).cwiseMax(0.0);
  return w3_ * h2 + b3_;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd h1 = ((w1_ * x).colwise() + b1_).cwiseMax(0.0);
  const Eigen::MatrixXd h2 = ((w2_ * h1).colwise() + b2_).cwiseMax(0.0);
  return (w3_ * h2).colwise() + b3_;
}

double Mlp::loss(const Eigen::MatrixXd& x, const std::vector<std::size_t>& actions,
                 const Eigen::VectorXd& targets) const {
  const Eigen::MatrixXd out = forward(x);
  double l = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    const double e = out(static_cast<Index>(actions[static_cast<std::size_t>(j)]), j) - targets(j);
    l += 0.5 * e * e;
  }
  return l / static_cast<double>(x.cols());
}

double Mlp::train_step(const Eigen::MatrixXd& x, const std::vector<std::size_t>& actions,
                       const Eigen::VectorXd& targets, double learning_rate, double grad_clip) {
  const Index n = x.cols();
  require(n > 0 && static_cast<std::size_t>(n) == actions.size() && targets.size() == n, "Mlp::train_step: batch mismatch");
  const Eigen::MatrixXd z1 = (w1_ * x).colwise() + b1_;
  const Eigen::MatrixXd h1 = z1.cwiseMax(0.0);
  const Eigen::MatrixXd z2 = (w2_ * h1).colwise() + b2_;
  const Eigen::MatrixXd h2 = z2.cwiseMax(0.0);
  const Eigen::MatrixXd out = (w3_ * h2).colwise() + b3_;

  Eigen::MatrixXd d3 = Eigen::MatrixXd::Zero(out.rows(), n);
  double l = 0.0;
  for (Index j = 0; j < n; ++j) {
    const auto a = static_cast<Index>(actions[static_cast<std::size_t>(j)]);
    const double e = out(a, j) - targets(j);
    l += 0.5 * e * e;
    d3(a, j) = e / static_cast<double>(n);
  }
  l /= static_cast<double>(n);

  Eigen::MatrixXd gw3 = d3 * h2.transpose();
  Eigen::VectorXd gb3 = d3.rowwise().sum();
  Eigen::MatrixXd d2 = (w3_.transpose() * d3).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  Eigen::MatrixXd gw2 = d2 * h1.transpose();
  Eigen::VectorXd gb2 = d2.rowwise().sum();
  Eigen::MatrixXd d1 = (w2_.transpose() * d2).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  Eigen::MatrixXd gw1 = d1 * x.transpose();
  Eigen::VectorXd gb1 = d1.rowwise().sum();

  const double norm = std::sqrt(gw1.squaredNorm() + gw2.squaredNorm() + gw3.squaredNorm() + gb1.squaredNorm() +
                                gb2.squaredNorm() + gb3.squaredNorm());
  if (grad_clip > 0.0 && norm > grad_clip) {
    const double s = grad_clip / norm;
    gw1 *= s;
    gw2 *= s;
    gw3 *= s;
    gb1 *= s;
    gb2 *= s;
    gb3 *= s;
  }
  ++steps_;
  const double bc1 = 1.0 - std::pow(0.9, static_cast<double>(steps_));
  const double bc2 = 1.0 - std::pow(0.999, static_cast<double>(steps_));
  adam(w1_, m_.w1, v_.w1, gw1, learning_rate, bc1, bc2);
  adam(w2_, m_.w2, v_.w2, gw2, learning_rate, bc1, bc2);
  adam(w3_, m_.w3, v_.w3, gw3, learning_rate, bc1, bc2);
  adam(b1_, m_.b1, v_.b1, gb1, learning_rate, bc1, bc2);
  adam(b2_, m_.b2, v_.b2, gb2, learning_rate, bc1, bc2);
  adam(b3_, m_.b3, v_.b3, gb3, learning_rate, bc1, bc2);
  return l;
}

void Mlp::copy_weights_from(const Mlp& other) {
  w1_ = other.w1_;
  w2_ = other.w2_;
  w3_ = other.w3_;
  b1_ = other.b1_;
  b2_ = other.b2_;
  b3_ = other.b3_;
}

bool Mlp::finite() const {
  return w1_.allFinite() && w2_.allFinite() && w3_.allFinite() && b1_.allFinite() && b2_.allFinite() &&
         b3_.allFinite();
}

NnqAgent::NnqAgent(std::size_t window_dim, std::size_t n_actions, NnqConfig cfg, Rng& rng)
    : window_dim_(window_dim),
      n_actions_(n_actions),
      cfg_(cfg),
      online_(window_dim, cfg.hidden, n_actions, rng),
      target_(online_),
      init_rng_(rng()) {
  require(cfg_.batch >= 1 && cfg_.replay_capacity >= cfg_.batch, "NnqAgent: replay must hold at least one batch");
  require(cfg_.learning_rate > 0, "NnqAgent: learning rate must be positive");
  require(cfg_.target_period >= 1, "NnqAgent: target period must be >= 1");
}

std::vector<double> NnqAgent::q_values(const Eigen::VectorXd& window) const {
  const Eigen::VectorXd q = online_.forward(window);
  return {q.data(), q.data() + q.size()};
}

std::size_t NnqAgent::act(const Eigen::VectorXd& window, double epsilon, Rng& rng) const {
  if (epsilon > 0.0 && uniform01(rng) < epsilon)
    return std::uniform_int_distribution<std::size_t>(0, n_actions_ - 1)(rng);
  const auto q = q_values(window);
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a)
    if (q[a] > q[best]) best = a;
  return best;
}

void NnqAgent::observe(const Eigen::VectorXd& window, std::size_t action, double reward,
                       const Eigen::VectorXd& next_window, double discount, Rng& rng) {
  Transition t{window, action, reward, next_window};
  if (replay_.size() < cfg_.replay_capacity) {
    replay_.push_back(std::move(t));
  } else {
    replay_[next_slot_] = std::move(t);
    next_slot_ = (next_slot_ + 1) % cfg_.replay_capacity;
  }
  if (replay_.size() < std::max(cfg_.warmup, cfg_.batch)) return;

  const auto b = static_cast<Index>(cfg_.batch);
  Eigen::MatrixXd s(static_cast<Index>(window_dim_), b), s2(static_cast<Index>(window_dim_), b);
  std::vector<std::size_t> acts(cfg_.batch);
  Eigen::VectorXd rewards(b);
  std::uniform_int_distribution<std::size_t> pick(0, replay_.size() - 1);
  for (Index j = 0; j < b; ++j) {
    const auto& tr = replay_[pick(rng)];
    s.col(j) = tr.s;
    s2.col(j) = tr.s2;
    acts[static_cast<std::size_t>(j)] = tr.a;
    rewards(j) = tr.r;
  }
  const Eigen::VectorXd targets = rewards + discount * target_.forward(s2).colwise().maxCoeff().transpose();
  const double l = online_.train_step(s, acts, targets, cfg_.learning_rate);
  if (!std::isfinite(l) || !online_.finite()) {
    if (reinits_ > 0) throw NumericalError("NnqAgent: training diverged twice (non-finite loss)");
    ++reinits_;
    log().warn("NnqAgent: non-finite loss, reinitializing the network");
    online_ = Mlp(window_dim_, cfg_.hidden, n_actions_, init_rng_);
    target_ = online_;
    return;
  }
  if (++updates_ % cfg_.target_period == 0) target_.copy_weights_from(online_);
}

}  // namespace sir::access
