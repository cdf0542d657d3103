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

#include "sir/mapping/sticky_hmm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/common/log.hpp"

namespace sir::mapping {

namespace {

struct Emission {
  std::vector<double> mean, var;
};

struct Suff {
  double n = 0.0;
  std::vector<double> sum, sumsq;
};

struct Prior {
  std::vector<double> m0, b0;
  double kappa0 = 0.01;
  double a0 = 1.0;
};

struct NigPost {
  double m, kappa, a, b;
};

NigPost nig_post(const Prior& p, const Suff& s, std::size_t d) {
  const double n = s.n;
  const double xbar = n > 0 ? s.sum[d] / n : 0.0;
  const double ss = n > 0 ? std::max(0.0, s.sumsq[d] - n * xbar * xbar) : 0.0;
  const double kappa = p.kappa0 + n;
  const double m = (p.kappa0 * p.m0[d] + s.sum[d]) / kappa;
  const double a = p.a0 + 0.5 * n;
  const double b = p.b0[d] + 0.5 * ss + 0.5 * p.kappa0 * n * (xbar - p.m0[d]) * (xbar - p.m0[d]) / kappa;
  return {m, kappa, a, b};
}

// Within-regime noise scale from successive differences, which are mostly
// taken inside a regime when labels are piecewise constant.
double successive_difference_variance(const std::vector<ObservationSequence>& seqs, std::size_t d) {
  std::vector<double> sq;
  for (const auto& s : seqs)
    for (std::size_t t = 1; t < s.size(); ++t) {
      const double diff = s[t][d] - s[t - 1][d];
      sq.push_back(diff * diff);
    }
  if (sq.empty()) return 0.0;
  const auto mid = sq.begin() + static_cast<std::ptrdiff_t>(sq.size() / 2);
  std::nth_element(sq.begin(), mid, sq.end());
  // Median of a chi-square(1) variable is 0.4549; differences carry twice the variance.
  return *mid / (2.0 * 0.45493642311957184);
}

std::size_t sample_index(const std::vector<double>& weights, double total, Rng& rng) {
  double u = uniform01(rng) * total;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    if (u < weights[k]) return k;
    u -= weights[k];
  }
  return weights.size() - 1;
}

}  // namespace

std::vector<ObservationSequence> observations(const std::vector<std::vector<rf::SensingSample>>& sequences) {
  std::vector<ObservationSequence> out;
  out.reserve(sequences.size());
  for (const auto& seq : sequences) {
    ObservationSequence obs;
    obs.reserve(seq.size());
    for (const auto& s : seq) obs.push_back(s.energies);
    out.push_back(std::move(obs));
  }
  return out;
}

Eigen::MatrixXd empirical_transitions(const std::vector<std::vector<std::size_t>>& labels, std::size_t k) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (const auto& seq : labels)
    for (std::size_t i = 1; i < seq.size(); ++i) t(static_cast<Eigen::Index>(seq[i - 1]), static_cast<Eigen::Index>(seq[i])) += 1.0;
  for (Eigen::Index j = 0; j < t.rows(); ++j) {
    const double row = t.row(j).sum();
    if (row > 0.0) {
      t.row(j) /= row;
    } else {
      t(j, j) = 1.0;
    }
  }
  return t;
}

double switch_rate(const std::vector<std::vector<std::size_t>>& labels) {
  double switches = 0.0, pairs = 0.0;
  for (const auto& seq : labels)
    for (std::size_t i = 1; i < seq.size(); ++i) {
      pairs += 1.0;
      if (seq[i] != seq[i - 1]) switches += 1.0;
    }
  return pairs > 0.0 ? switches / pairs : 0.0;
}

StickyHmmFit fit_sticky_hmm(const std::vector<std::vector<rf::SensingSample>>& sequences,
                            const StickyHmmOptions& options, Rng& rng) {
  return fit_sticky_hmm(observations(sequences), options, rng);
}

StickyHmmFit fit_sticky_hmm(const std::vector<ObservationSequence>& seqs, const StickyHmmOptions& options, Rng& rng) {
  require(!seqs.empty(), "fit_sticky_hmm: no sequences");
  require(options.k_max >= 2, "fit_sticky_hmm: k_max must be >= 2");
  require(options.sweeps > 0 && options.burn_in < options.sweeps, "fit_sticky_hmm: burn_in must be below sweeps");
  const auto& hp = options.hypers;
  require(hp.gamma > 0 && hp.alpha > 0 && hp.kappa >= 0, "fit_sticky_hmm: concentrations must be positive");
  std::size_t dims = 0;
  std::size_t total = 0;
  for (const auto& s : seqs) {
    require(!s.empty(), "fit_sticky_hmm: empty sequence");
    for (const auto& x : s) {
      if (dims == 0) dims = x.size();
      require(x.size() == dims && dims > 0, "fit_sticky_hmm: inconsistent observation dimension");
      for (double v : x) require(std::isfinite(v), "fit_sticky_hmm: non-finite observation");
    }
    total += s.size();
  }
  const std::size_t K = options.k_max;

  Prior prior;
  prior.kappa0 = hp.mean_kappa0;
  prior.a0 = hp.var_a0;
  prior.m0.assign(dims, 0.0);
  prior.b0.assign(dims, 0.0);
  std::vector<double> pooled_var(dims, 0.0);
  for (std::size_t d = 0; d < dims; ++d) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& s : seqs)
      for (const auto& x : s) {
        sum += x[d];
        sumsq += x[d] * x[d];
      }
    prior.m0[d] = sum / static_cast<double>(total);
    pooled_var[d] = std::max(0.0, sumsq / static_cast<double>(total) - prior.m0[d] * prior.m0[d]);
    double scale = successive_difference_variance(seqs, d);
    if (!(scale > 0.0)) scale = pooled_var[d];
    const double floor = 1e-12 * (1.0 + prior.m0[d] * prior.m0[d]);
    prior.b0[d] = prior.a0 * std::max(scale, floor);
  }

  // Initial emissions centered on randomly chosen observations.
  std::vector<Emission> emit(K);
  std::uniform_int_distribution<std::size_t> pick_seq(0, seqs.size() - 1);
  for (auto& e : emit) {
    const auto& s = seqs[pick_seq(rng)];
    const auto& x = s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)];
    e.mean = x;
    e.var.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) e.var[d] = prior.b0[d] / prior.a0;
  }
  std::vector<double> beta(K, 1.0 / static_cast<double>(K));
  std::vector<std::vector<double>> pi(K);
  std::vector<double> conc(K);
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t k = 0; k < K; ++k) conc[k] = hp.alpha * beta[k] + (j == k ? hp.kappa : 0.0);
    pi[j] = sample_dirichlet(conc, rng);
  }

  std::vector<std::vector<std::size_t>> z(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) z[i].assign(seqs[i].size(), 0);

  std::vector<double> loglik(K), lik_row(K), fwd_tmp(K), w(K);
  std::vector<std::vector<double>> fwd;
  const double log2pi = std::log(2.0 * std::numbers::pi);
  const double rho = hp.kappa / (hp.alpha + hp.kappa);

  for (std::size_t sweep = 0; sweep < options.sweeps; ++sweep) {
    // Per-state emission constants.
    std::vector<double> log_norm(K, 0.0);
    std::vector<std::vector<double>> inv2v(K, std::vector<double>(dims));
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t d = 0; d < dims; ++d) {
        log_norm[k] -= 0.5 * (log2pi + std::log(emit[k].var[d]));
        inv2v[k][d] = 0.5 / emit[k].var[d];
      }

    // Forward filtering, backward sampling.
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      const auto& s = seqs[i];
      const std::size_t T = s.size();
      fwd.assign(T, std::vector<double>(K));
      for (std::size_t t = 0; t < T; ++t) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
          double ll = log_norm[k];
          for (std::size_t d = 0; d < dims; ++d) {
            const double r = s[t][d] - emit[k].mean[d];
            ll -= r * r * inv2v[k][d];
          }
          loglik[k] = ll;
          mx = std::max(mx, ll);
        }
        for (std::size_t k = 0; k < K; ++k) lik_row[k] = std::exp(loglik[k] - mx);
        double norm = 0.0;
        if (t == 0) {
          for (std::size_t k = 0; k < K; ++k) {
            fwd[t][k] = beta[k] * lik_row[k];
            norm += fwd[t][k];
          }
        } else {
          std::fill(fwd_tmp.begin(), fwd_tmp.end(), 0.0);
          for (std::size_t j = 0; j < K; ++j) {
            const double a = fwd[t - 1][j];
            if (a == 0.0) continue;
            const auto& row = pi[j];
            for (std::size_t k = 0; k < K; ++k) fwd_tmp[k] += a * row[k];
          }
          for (std::size_t k = 0; k < K; ++k) {
            fwd[t][k] = fwd_tmp[k] * lik_row[k];
            norm += fwd[t][k];
          }
        }
        if (!(norm > 0.0)) {
          // Every reachable state assigns negligible likelihood; restart from the emissions alone.
          norm = 0.0;
          for (std::size_t k = 0; k < K; ++k) {
            fwd[t][k] = lik_row[k];
            norm += lik_row[k];
          }
        }
        for (double& v : fwd[t]) v /= norm;
      }
      double tot = std::accumulate(fwd[T - 1].begin(), fwd[T - 1].end(), 0.0);
      z[i][T - 1] = sample_index(fwd[T - 1], tot, rng);
      for (std::size_t t = T - 1; t-- > 0;) {
        const std::size_t next = z[i][t + 1];
        tot = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          w[k] = fwd[t][k] * pi[k][next];
          tot += w[k];
        }
        if (!(tot > 0.0)) {
          w = fwd[t];
          tot = 1.0;
        }
        z[i][t] = sample_index(w, tot, rng);
      }
    }

    // Transition counts and emission statistics.
    std::vector<std::vector<double>> n(K, std::vector<double>(K, 0.0));
    std::vector<Suff> suff(K);
    for (auto& sf : suff) {
      sf.sum.assign(dims, 0.0);
      sf.sumsq.assign(dims, 0.0);
    }
    for (std::size_t i = 0; i < seqs.size(); ++i)
      for (std::size_t t = 0; t < seqs[i].size(); ++t) {
        const std::size_t k = z[i][t];
        if (t > 0) n[z[i][t - 1]][k] += 1.0;
        auto& sf = suff[k];
        sf.n += 1.0;
        for (std::size_t d = 0; d < dims; ++d) {
          sf.sum[d] += seqs[i][t][d];
          sf.sumsq[d] += seqs[i][t][d] * seqs[i][t][d];
        }
      }

    // Auxiliary table counts, with the sticky override on the diagonal.
    std::vector<double> mbar(K, 0.0);
    for (std::size_t j = 0; j < K; ++j)
      for (std::size_t k = 0; k < K; ++k) {
        const auto njk = static_cast<std::size_t>(n[j][k]);
        if (njk == 0) continue;
        const double c = hp.alpha * beta[k] + (j == k ? hp.kappa : 0.0);
        std::size_t m = 0;
        for (std::size_t r = 0; r < njk; ++r)
          if (uniform01(rng) < c / (static_cast<double>(r) + c)) ++m;
        if (j == k && m > 0) {
          const double p = rho / (rho + beta[j] * (1.0 - rho));
          m -= std::binomial_distribution<std::size_t>(m, p)(rng);
        }
        mbar[k] += static_cast<double>(m);
      }
    for (std::size_t k = 0; k < K; ++k) conc[k] = hp.gamma / static_cast<double>(K) + mbar[k];
    beta = sample_dirichlet(conc, rng);

    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t k = 0; k < K; ++k) conc[k] = hp.alpha * beta[k] + (j == k ? hp.kappa : 0.0) + n[j][k];
      pi[j] = sample_dirichlet(conc, rng);
    }

    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t d = 0; d < dims; ++d) {
        const NigPost p = nig_post(prior, suff[k], d);
        const double var = 1.0 / std::gamma_distribution<double>(p.a, 1.0 / p.b)(rng);
        emit[k].var[d] = std::max(var, 1e-300);
        emit[k].mean[d] = p.m + std::sqrt(emit[k].var[d] / p.kappa) * std::normal_distribution<double>()(rng);
      }
  }

  // Point estimate from the last sweep's labels.
  std::vector<Suff> suff(K);
  for (auto& sf : suff) {
    sf.sum.assign(dims, 0.0);
    sf.sumsq.assign(dims, 0.0);
  }
  for (std::size_t i = 0; i < seqs.size(); ++i)
    for (std::size_t t = 0; t < seqs[i].size(); ++t) {
      auto& sf = suff[z[i][t]];
      sf.n += 1.0;
      for (std::size_t d = 0; d < dims; ++d) {
        sf.sum[d] += seqs[i][t][d];
        sf.sumsq[d] += seqs[i][t][d] * seqs[i][t][d];
      }
    }
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < K; ++k)
    if (suff[k].n > 0) active.push_back(k);
  std::vector<std::vector<double>> means(K), vars(K);
  for (std::size_t k : active) {
    means[k].resize(dims);
    vars[k].resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      const NigPost p = nig_post(prior, suff[k], d);
      means[k][d] = p.m;
      vars[k][d] = p.a > 1.0 ? p.b / (p.a - 1.0) : p.b / p.a;
    }
  }
  std::sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
  std::vector<std::size_t> relabel(K, 0);
  for (std::size_t r = 0; r < active.size(); ++r) relabel[active[r]] = r;

  StickyHmmFit fit;
  const auto ka = static_cast<Eigen::Index>(active.size());
  fit.transition = Eigen::MatrixXd::Zero(ka, ka);
  for (Eigen::Index a = 0; a < ka; ++a) {
    double row = 0.0;
    for (Eigen::Index b = 0; b < ka; ++b) {
      fit.transition(a, b) = pi[active[static_cast<std::size_t>(a)]][active[static_cast<std::size_t>(b)]];
      row += fit.transition(a, b);
    }
    if (row > 0.0) {
      fit.transition.row(a) /= row;
    } else {
      fit.transition.row(a).setZero();
      fit.transition(a, a) = 1.0;
    }
  }
  for (std::size_t k : active) {
    fit.means.push_back(means[k]);
    fit.variances.push_back(vars[k]);
    fit.counts.push_back(suff[k].n);
  }
  fit.labels = z;
  for (auto& seq : fit.labels)
    for (auto& l : seq) l = relabel[l];
  if (active.size() == K) {
    fit.diagnostics.push_back(fmt::format("all {} truncation states in use; k_max may be below the true state count", K));
    log().warn("fit_sticky_hmm: {}", fit.diagnostics.back());
  }
  return fit;
}

}  // namespace sir::mapping
