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
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sir::access {

struct GpHypers {
  double lengthscale = 1.0;
  double signal_var = 1.0;
  double noise = 0.1;      ///< lambda
  double ald_tol = 0.01;   ///< nu
  std::size_t budget = 300;
  double step = 0.5;       ///< coefficient step for non-novel updates
};

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Sparse online GP regressor with a squared-exponential kernel. The
/// dictionary holds feature points and their regression targets; two
/// Cholesky factors are maintained incrementally: one of the jittered kernel
/// matrix (novelty test) and one of K + lambda I (prediction).
class GpQModel {
 public:
  explicit GpQModel(GpHypers hypers = {});

  const GpHypers& hypers() const { return hypers_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Eigen::VectorXd>& dictionary() const { return points_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  /// (K + lambda I)^{-1} y over the dictionary.
  const Eigen::VectorXd& coefficients() const { return coef_; }
  std::size_t rebuilds() const { return rebuilds_; }

  double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  Eigen::VectorXd kernel_vector(const Eigen::VectorXd& x) const;

  GpPrediction predict(const Eigen::VectorXd& x) const;

  /// Posterior means for every candidate action when the feature is
  /// `head` followed by a one-hot block of `n_actions` entries.
  std::vector<double> predict_actions(const Eigen::VectorXd& head, std::size_t n_actions) const;

  /// Squared kernel-space residual of projecting x onto the dictionary span.
  double novelty(const Eigen::VectorXd& x) const;

  /// Returns true when x was inserted into the dictionary.
  bool update(const Eigen::VectorXd& x, double target);

  /// Lower Cholesky factor of K + lambda I (for invariant checks).
  Eigen::MatrixXd regularized_factor() const;

 private:
  GpHypers hypers_;
  std::vector<Eigen::VectorXd> points_;
  Eigen::VectorXd targets_;
  Eigen::VectorXd coef_;
  Eigen::MatrixXd l_ald_;  // capacity x capacity, leading size() block valid
  Eigen::MatrixXd l_reg_;
  double jitter_;
  std::size_t rebuilds_ = 0;

  void insert(const Eigen::VectorXd& x, double target);
  void evict_oldest();
  void rebuild();
  void refresh_coefficients();
};

inline GpPrediction gp_predict(const GpQModel& gp, const Eigen::VectorXd& x) { return gp.predict(x); }
inline bool gp_update(GpQModel& gp, const Eigen::VectorXd& x, double target) { return gp.update(x, target); }

/// TOML snapshot: kernel hypers, dictionary size and coefficients.
std::string gp_snapshot_toml(const GpQModel& gp);

}  // namespace sir::access
