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

#include "sir/access/gp.hpp"

#include <algorithm>
#include <cmath>

#include "sir/common/error.hpp"
#include "sir/common/log.hpp"
#include "sir/common/toml.hpp"

namespace sir::access {

namespace {

using Index = Eigen::Index;

// Appends row [k; kxx] to a lower factor whose leading m x m block is valid.
// Returns false if the new pivot is not positive.
bool append_row(Eigen::MatrixXd& l, Index m, const Eigen::VectorXd& k, double kxx) {
  Eigen::VectorXd r = k;
  if (m > 0) l.topLeftCorner(m, m).triangularView<Eigen::Lower>().solveInPlace(r);
  const double d2 = kxx - r.squaredNorm();
  if (!(d2 > 0.0) || !std::isfinite(d2)) return false;
  l.row(m).head(m) = r.transpose();
  l(m, m) = std::sqrt(d2);
  l.row(m).segment(m + 1, l.cols() - m - 1).setZero();
  return true;
}

// Drops the first row and column: the trailing block absorbs a rank-1 update.
void drop_first(Eigen::MatrixXd& l, Index m) {
  Eigen::VectorXd v = l.col(0).segment(1, m - 1);
  Eigen::MatrixXd t = l.block(1, 1, m - 1, m - 1);
  for (Index i = 0; i < m - 1; ++i) {
    const double lii = t(i, i);
    const double r = std::hypot(lii, v(i));
    const double c = r / lii, s = v(i) / lii;
    t(i, i) = r;
    for (Index j = i + 1; j < m - 1; ++j) {
      t(j, i) = (t(j, i) + s * v(j)) / c;
      v(j) = c * v(j) - s * t(j, i);
    }
  }
  l.topLeftCorner(m - 1, m - 1) = t.triangularView<Eigen::Lower>();
  l.row(m - 1).setZero();
  l.col(m - 1).setZero();
  for (Index i = 0; i < m - 1; ++i) l.row(i).segment(i + 1, l.cols() - i - 1).setZero();
}

}  // namespace

GpQModel::GpQModel(GpHypers hypers) : hypers_(hypers) {
  require(hypers_.lengthscale > 0 && hypers_.signal_var > 0, "GpQModel: kernel hyperparameters must be positive");
  require(hypers_.noise > 0, "GpQModel: noise must be positive");
  require(hypers_.ald_tol >= 0, "GpQModel: ALD tolerance must be >= 0");
  require(hypers_.budget >= 1, "GpQModel: budget must be >= 1");
  require(hypers_.step > 0 && hypers_.step <= 1, "GpQModel: step must be in (0, 1]");
  jitter_ = 1e-8 * hypers_.signal_var;
  const auto cap = static_cast<Index>(hypers_.budget);
  l_ald_ = Eigen::MatrixXd::Zero(cap, cap);
  l_reg_ = Eigen::MatrixXd::Zero(cap, cap);
}

double GpQModel::kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  const double l2 = hypers_.lengthscale * hypers_.lengthscale;
  return hypers_.signal_var * std::exp(-0.5 * (a - b).squaredNorm() / l2);
}

Eigen::VectorXd GpQModel::kernel_vector(const Eigen::VectorXd& x) const {
  Eigen::VectorXd k(static_cast<Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) k(static_cast<Index>(i)) = kernel(points_[i], x);
  return k;
}

GpPrediction GpQModel::predict(const Eigen::VectorXd& x) const {
  const double kxx = hypers_.signal_var;
  if (points_.empty()) return {0.0, kxx};
  const Eigen::VectorXd k = kernel_vector(x);
  const auto m = static_cast<Index>(size());
  Eigen::VectorXd r = k;
  l_reg_.topLeftCorner(m, m).triangularView<Eigen::Lower>().solveInPlace(r);
  return {k.dot(coef_), std::max(0.0, kxx - r.squaredNorm())};
}

std::vector<double> GpQModel::predict_actions(const Eigen::VectorXd& head, std::size_t n_actions) const {
  std::vector<double> out(n_actions, 0.0);
  if (points_.empty()) return out;
  const auto h = head.size();
  const double inv2l2 = 0.5 / (hypers_.lengthscale * hypers_.lengthscale);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& p = points_[i];
    require(p.size() == h + static_cast<Index>(n_actions), "predict_actions: feature layout mismatch");
    const double d_head = (p.head(h) - head).squaredNorm();
    const auto tail = p.tail(static_cast<Index>(n_actions));
    const double tail_sq = tail.squaredNorm();
    const double c = coef_(static_cast<Index>(i)) * hypers_.signal_var;
    for (std::size_t a = 0; a < n_actions; ++a) {
      // |e_a - tail|^2 = 1 - 2 tail[a] + |tail|^2
      const double d = d_head + 1.0 - 2.0 * tail(static_cast<Index>(a)) + tail_sq;
      out[a] += c * std::exp(-d * inv2l2);
    }
  }
  return out;
}

double GpQModel::novelty(const Eigen::VectorXd& x) const {
  const double kxx = hypers_.signal_var + jitter_;
  if (points_.empty()) return kxx;
  const auto m = static_cast<Index>(size());
  Eigen::VectorXd r = kernel_vector(x);
  l_ald_.topLeftCorner(m, m).triangularView<Eigen::Lower>().solveInPlace(r);
  return std::max(0.0, kxx - r.squaredNorm());
}

bool GpQModel::update(const Eigen::VectorXd& x, double target) {
  require(std::isfinite(target), "gp_update: non-finite target");
  if (!points_.empty()) require(x.size() == points_.front().size(), "gp_update: feature dimension mismatch");
  if (novelty(x) > hypers_.ald_tol) {
    if (size() == hypers_.budget) evict_oldest();
    insert(x, target);
    return true;
  }
  // Spread the error over the dictionary along the projection weights.
  const auto m = static_cast<Index>(size());
  const Eigen::VectorXd k = kernel_vector(x);
  Eigen::VectorXd a = k;
  const auto lt = l_ald_.topLeftCorner(m, m).triangularView<Eigen::Lower>();
  lt.solveInPlace(a);
  lt.transpose().solveInPlace(a);
  const double norm2 = a.squaredNorm();
  if (norm2 <= 0.0) return false;
  const double err = target - k.dot(coef_);
  targets_ += (hypers_.step * err / norm2) * a;
  refresh_coefficients();
  return false;
}

void GpQModel::insert(const Eigen::VectorXd& x, double target) {
  const auto m = static_cast<Index>(size());
  const Eigen::VectorXd k = kernel_vector(x);
  const bool ok = append_row(l_ald_, m, k, hypers_.signal_var + jitter_) &&
                  append_row(l_reg_, m, k, hypers_.signal_var + hypers_.noise);
  points_.push_back(x);
  targets_.conservativeResize(m + 1);
  targets_(m) = target;
  if (!ok) {
    rebuild();
  } else {
    refresh_coefficients();
  }
}

void GpQModel::evict_oldest() {
  const auto m = static_cast<Index>(size());
  points_.erase(points_.begin());
  targets_ = targets_.tail(m - 1).eval();
  if (m == 1) {
    l_ald_.setZero();
    l_reg_.setZero();
    coef_.resize(0);
    return;
  }
  drop_first(l_ald_, m);
  drop_first(l_reg_, m);
  if (!l_ald_.topLeftCorner(m - 1, m - 1).diagonal().allFinite() ||
      (l_ald_.topLeftCorner(m - 1, m - 1).diagonal().array() <= 0.0).any()) {
    rebuild();
    return;
  }
  refresh_coefficients();
}

void GpQModel::rebuild() {
  ++rebuilds_;
  const auto m = static_cast<Index>(size());
  Eigen::MatrixXd k(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = kernel(points_[i], points_[j]);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> ald(k + jitter_ * Eigen::MatrixXd::Identity(m, m));
    Eigen::LLT<Eigen::MatrixXd> reg(k + hypers_.noise * Eigen::MatrixXd::Identity(m, m));
    if (ald.info() == Eigen::Success && reg.info() == Eigen::Success) {
      l_ald_.setZero();
      l_reg_.setZero();
      l_ald_.topLeftCorner(m, m) = ald.matrixL();
      l_reg_.topLeftCorner(m, m) = reg.matrixL();
      log().info("GpQModel: refactorized {} dictionary points with jitter {:.3g}", m, jitter_);
      refresh_coefficients();
      return;
    }
    jitter_ *= 10.0;
  }
  throw NumericalError("GpQModel: kernel matrix could not be factorized");
}

void GpQModel::refresh_coefficients() {
  const auto m = static_cast<Index>(size());
  coef_ = targets_;
  const auto lt = l_reg_.topLeftCorner(m, m).triangularView<Eigen::Lower>();
  lt.solveInPlace(coef_);
  lt.transpose().solveInPlace(coef_);
}

Eigen::MatrixXd GpQModel::regularized_factor() const {
  const auto m = static_cast<Index>(size());
  return l_reg_.topLeftCorner(m, m);
}

std::string gp_snapshot_toml(const GpQModel& gp) {
  toml::Json root = toml::Json::object();
  const auto& h = gp.hypers();
  root["kernel"] = {{"type", "squared_exponential"}, {"lengthscale", h.lengthscale}, {"signal_var", h.signal_var}};
  root["noise"] = h.noise;
  root["ald_tol"] = h.ald_tol;
  root["budget"] = h.budget;
  root["dictionary_size"] = gp.size();
  toml::Json coef = toml::Json::array();
  for (Index i = 0; i < gp.coefficients().size(); ++i) coef.push_back(gp.coefficients()(i));
  root["coefficients"] = coef;
  return toml::dump(root);
}

}  // namespace sir::access
