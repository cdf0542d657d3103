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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sir/common/error.hpp"
#include "sir/common/random.hpp"
#include "sir/common/stats.hpp"
#include "sir/common/toml.hpp"
#include "sir/perception/dpgmm.hpp"
#include "sir/perception/dwell.hpp"
#include "sir/perception/gmm.hpp"
#include "sir/perception/meanshift.hpp"
#include "sir/perception/predict.hpp"
#include "sir/perception/thresholds.hpp"
#include "sir/rf/power_process.hpp"
#include "sir/rf/sensing.hpp"

using namespace sir;
using namespace sir::perception;

namespace {

double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
std::size_t uniform_index(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

struct Trace {
  std::vector<double> powers;
  std::vector<std::size_t> levels;
  std::vector<double> energies;
};

// Four equiprobable levels 0, p, 2p, 3p with mean non-zero power at gamma_db over unit noise.
Trace four_level_trace(double gamma_db, std::size_t windows, std::size_t n, std::uint64_t seed) {
  rf::PuNode pu;
  const double p = std::pow(10.0, gamma_db / 10.0) / 2.0;
  pu.power_levels = {0.0, p, 2 * p, 3 * p};
  pu.level_priors = {0.25, 0.25, 0.25, 0.25};
  pu.mean_dwell = 20;
  Rng rng = make_rng(seed, 31);
  Trace t;
  t.powers = pu.power_levels;
  t.levels = rf::sample_power_process(pu, windows, rng);
  for (auto l : t.levels) t.energies.push_back(rf::sense_window(pu.power_levels[l], 1.0, n, rng));
  return t;
}

std::vector<double> gaussian_clusters(const std::vector<double>& means, double var, std::size_t per, Rng& rng) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < per; ++i)
    for (double m : means) xs.push_back(m + std::sqrt(var) * standard_normal(rng));
  return xs;
}

std::vector<std::size_t> levels_of(const std::vector<LevelPrediction>& preds) {
  std::vector<std::size_t> out;
  for (const auto& p : preds) out.push_back(p.level);
  return out;
}

void expect_canonical(const GmmFit& fit) {
  ASSERT_GE(fit.k(), 1U);
  for (std::size_t j = 1; j < fit.k(); ++j) EXPECT_LT(fit.means[j - 1], fit.means[j]);
  EXPECT_NEAR(std::accumulate(fit.weights.begin(), fit.weights.end(), 0.0), 1.0, 1e-9);
}

}  // namespace

TEST(Thresholds, NeymanPearsonAtHalfIsTheNoiseVariance) {
  EXPECT_NEAR(np_threshold(0.5, 2.5, 100), 2.5, 1e-12);
  double prev = np_threshold(0.01, 1.0, 500);
  for (double pfa : {0.05, 0.1, 0.3, 0.7}) {
    const double t = np_threshold(pfa, 1.0, 500);
    EXPECT_LT(t, prev);
    prev = t;
  }
  EXPECT_THROW(np_threshold(0.0, 1.0, 10), InvalidArgument);
}

TEST(Thresholds, NeymanPearsonFalseAlarmRate) {
  const double t = np_threshold(0.1, 1.0, 500);
  Rng rng = make_rng(41);
  double alarms = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) alarms += rf::sense_window(0.0, 1.0, 500, rng) > t;
  EXPECT_NEAR(alarms / trials, 0.1, 0.015);
}

TEST(Thresholds, CommonVarianceGivesMidpoints) {
  const std::vector<double> powers{0.0, 2.0}, priors{0.5, 0.5};
  const auto th = map_thresholds(powers, priors, 1.0, 50, 0.3);
  ASSERT_EQ(th.size(), 1U);
  EXPECT_NEAR(th[0], 2.0, 1e-12);
}

TEST(Thresholds, MatchBisectionOracle) {
  const std::size_t n = 500;
  const double s2 = 1.0;
  for (double gamma_db : {-14.0, -8.0, 0.0}) {
    const double p = std::pow(10.0, gamma_db / 10.0) / 2.0;
    const std::vector<double> powers{0.0, p, 2 * p, 3 * p}, priors{0.1, 0.2, 0.3, 0.4};
    const auto th = map_thresholds(powers, priors, s2, n);
    ASSERT_EQ(th.size(), 3U);
    for (std::size_t l = 0; l + 1 < powers.size(); ++l)
      EXPECT_NEAR(th[l], oracle::map_boundary(powers, priors, s2, n, l), 1e-6) << gamma_db << " " << l;
  }
}

TEST(Thresholds, ClassificationEqualsPosteriorArgmax) {
  const std::size_t n = 500;
  const double p = std::pow(10.0, -1.0) / 2.0;
  const std::vector<double> powers{0.0, p, 2 * p, 3 * p}, priors{0.25, 0.25, 0.25, 0.25};
  const auto th = map_thresholds(powers, priors, 1.0, n);
  Rng rng = make_rng(42);
  for (int i = 0; i < 10000; ++i) {
    const double e = rf::sense_window(powers[i % 4], 1.0, n, rng);
    std::size_t best = 0;
    double best_lp = -INFINITY;
    for (std::size_t l = 0; l < 4; ++l) {
      const double m = 1.0 + powers[l];
      const double lp = std::log(priors[l]) + normal_log_pdf(e, m, m * m / n);
      if (lp > best_lp) best_lp = lp, best = l;
    }
    ASSERT_EQ(classify_by_thresholds(th, e), best) << e;
  }
}

TEST(Ccdpgmm, RecoversFourSeparatedClusters) {
  Rng rng = make_rng(43);
  const std::vector<double> truth{0.0, 1.0, 2.0, 3.0};
  const auto xs = gaussian_clusters(truth, 0.01, 500, rng);
  const auto fit = fit_ccdpgmm(xs, DpOptions{}, rng);
  ASSERT_EQ(fit.gmm.k(), 4U);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(fit.gmm.means[j], truth[j], 0.05);
  expect_canonical(fit.gmm);
}

TEST(Ccdpgmm, IdenticalValuesCollapseToOneComponent) {
  Rng rng = make_rng(44);
  const std::vector<double> xs(200, 1.25);
  const auto fit = fit_ccdpgmm(xs, DpOptions{}, rng);
  EXPECT_EQ(fit.gmm.k(), 1U);
  EXPECT_NEAR(fit.gmm.means[0], 1.25, 1e-9);
}

TEST(Ccdpgmm, RejectsShortOrNonFiniteInput) {
  Rng rng = make_rng(45);
  EXPECT_THROW(fit_ccdpgmm(std::vector<double>(49, 1.0), DpOptions{}, rng), InvalidArgument);
  std::vector<double> xs(100, 1.0);
  xs[7] = NAN;
  EXPECT_THROW(fit_ccdpgmm(xs, DpOptions{}, rng), InvalidArgument);
}

TEST(Ccdpgmm, PrunedFitIsConsistentWithAssignments) {
  const auto t = four_level_trace(-6.0, 1500, 500, 46);
  Rng rng = make_rng(46, 1);
  const auto fit = fit_ccdpgmm(t.energies, DpOptions{}, rng);
  expect_canonical(fit.gmm);
  ASSERT_EQ(fit.assignments.size(), t.energies.size());
  std::vector<std::size_t> owned(fit.gmm.k(), 0);
  for (auto a : fit.assignments) {
    ASSERT_LT(a, fit.gmm.k());
    ++owned[a];
  }
  for (std::size_t j = 0; j < fit.gmm.k(); ++j) {
    EXPECT_GE(owned[j], 1U);
    EXPECT_GE(fit.gmm.weights[j], DpOptions{}.prune_weight);
  }
  EXPECT_EQ(fit.dwell.levels(), fit.gmm.k());
  EXPECT_EQ(fit.occupied_trace.size(), DpOptions{}.sweeps);
}

TEST(Ccdpgmm, FindsFourLevelsAtHighSnr) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = four_level_trace(0.0, 4000, 500, 100 + seed);
    Rng rng = make_rng(100 + seed, 2);
    hits += fit_ccdpgmm(t.energies, DpOptions{}, rng).gmm.k() == 4;
  }
  EXPECT_GE(hits, 19);
}

TEST(Emgmm, SingleComponentIsTheMle) {
  Rng rng = make_rng(47);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = 3.0 + 0.5 * standard_normal(rng);
  const auto fit = fit_emgmm(xs, 1, EmOptions{}, rng);
  ASSERT_EQ(fit.k(), 1U);
  EXPECT_NEAR(fit.means[0], mean(xs), 1e-9);
  EXPECT_NEAR(fit.variances[0], variance_mle(xs), 1e-9);
  EXPECT_DOUBLE_EQ(fit.weights[0], 1.0);
}

TEST(Emgmm, LogLikelihoodNeverDecreases) {
  Rng rng = make_rng(48);
  const auto xs = gaussian_clusters({0.0, 0.7, 1.5, 2.0}, 0.09, 300, rng);
  const auto trace = fit_emgmm_traced(xs, 4, EmOptions{}, rng);
  ASSERT_GE(trace.log_likelihood_history.size(), 2U);
  for (std::size_t i = 1; i < trace.log_likelihood_history.size(); ++i)
    EXPECT_GE(trace.log_likelihood_history[i], trace.log_likelihood_history[i - 1] - 1e-9 * std::abs(trace.log_likelihood_history[i - 1]));
  expect_canonical(trace.fit);
}

TEST(Emgmm, RecoversSeparatedMeans) {
  Rng rng = make_rng(49);
  const std::vector<double> truth{0.0, 1.0, 2.0, 3.0};
  const auto fit = fit_emgmm(gaussian_clusters(truth, 0.01, 500, rng), 4, EmOptions{}, rng);
  ASSERT_EQ(fit.k(), 4U);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(fit.means[j], truth[j], 0.05);
  EXPECT_THROW(fit_emgmm(std::vector<double>{1.0, 2.0}, 3, EmOptions{}, rng), InvalidArgument);
}

TEST(MeanShift, TwoClumpsGiveTwoModes) {
  Rng rng = make_rng(50);
  const auto xs = gaussian_clusters({0.0, 5.0}, 0.04, 200, rng);
  const auto ms = fit_meanshift(xs, 0.5);
  ASSERT_EQ(ms.modes.size(), 2U);
  EXPECT_NEAR(ms.modes[0], 0.0, 0.05);
  EXPECT_NEAR(ms.modes[1], 5.0, 0.05);
  EXPECT_EQ(ms.assignments.size(), xs.size());
}

TEST(MeanShift, WideBandwidthGivesOneMode) {
  Rng rng = make_rng(51);
  const auto xs = gaussian_clusters({0.0, 1.0, 2.0}, 0.01, 100, rng);
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  EXPECT_EQ(fit_meanshift(xs, *hi - *lo).modes.size(), 1U);
  EXPECT_GT(silverman_bandwidth(xs), 0.0);
}

TEST(Dwell, AlternatingHasUnitDwell) {
  std::vector<std::size_t> a;
  for (int i = 0; i < 100; ++i) a.push_back(i % 2);
  const auto d = infer_dwell(a, 2);
  for (double m : d.mean_dwell) EXPECT_NEAR(m, 1.0, 1e-12);
}

TEST(Dwell, ConstantRunsGiveTheirLength) {
  for (std::size_t len : {1, 3, 10}) {
    std::vector<std::size_t> a;
    for (int r = 0; r < 30; ++r)
      for (std::size_t i = 0; i < len; ++i) a.push_back(r % 3);
    const auto d = infer_dwell(a, 3);
    for (double m : d.mean_dwell) EXPECT_NEAR(m, static_cast<double>(len), 1e-9);
  }
  const auto d = infer_dwell(std::vector<std::size_t>{0, 0, 0}, 2);
  EXPECT_EQ(d.continuation[1], 0.0);
}

TEST(Dwell, GeometricRunsRecoverTheMean) {
  Rng rng = make_rng(52);
  std::geometric_distribution<int> extra(1.0 / 50.0);
  std::vector<std::size_t> a;
  std::size_t level = 0;
  while (a.size() < 100000) {
    const int len = 1 + extra(rng);
    a.insert(a.end(), static_cast<std::size_t>(len), level);
    level = 1 - level;
  }
  const auto d = infer_dwell(a, 2);
  for (double m : d.mean_dwell) EXPECT_NEAR(m, 50.0, 5.0);
}

TEST(Predict, ExamplesAndTieRule) {
  GmmFit fit;
  fit.weights = {0.5, 0.5};
  fit.means = {1.0, 2.0};
  fit.variances = {0.01, 0.01};
  EXPECT_EQ(predict_level(fit, 1.0).level, 0U);
  EXPECT_EQ(predict_level(fit, 2.1).level, 1U);
  EXPECT_EQ(predict_level(fit, 1.5).level, 0U);
  const auto p = predict_level(fit, 1.4);
  EXPECT_NEAR(p.posterior[0] + p.posterior[1], 1.0, 1e-12);
}

TEST(Predict, PosteriorIsInvariantToWeightScale) {
  GmmFit fit;
  fit.weights = {0.2, 0.3, 0.5};
  fit.means = {1.0, 1.3, 1.9};
  fit.variances = {0.02, 0.03, 0.05};
  GmmFit scaled = fit;
  for (auto& w : scaled.weights) w *= 7.5;
  for (double e : {0.8, 1.1, 1.45, 2.5}) {
    const auto a = predict_level(fit, e), b = predict_level(scaled, e);
    EXPECT_EQ(a.level, b.level);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.posterior[j], b.posterior[j], 1e-12);
  }
}

TEST(Predict, DwellPriorFollowsThePreviousLevel) {
  GmmFit fit;
  fit.weights = {0.5, 0.5};
  fit.means = {1.0, 2.0};
  fit.variances = {0.25, 0.25};
  DwellModel sticky{{0.99, 0.99}, {100, 100}};
  const auto prev = predict_level(fit, 2.0);
  // Slightly closer to the low mean, but the previous window was clearly high.
  const auto p = predict_level(fit, 1.45, &sticky, &prev);
  EXPECT_EQ(p.level, 1U);
  EXPECT_EQ(predict_level(fit, 1.45).level, 0U);
}

TEST(EvalPc, Examples) {
  const std::vector<std::size_t> t{0, 1, 2, 3};
  EXPECT_EQ(eval_pc(t, t), 1.0);
  EXPECT_EQ(eval_pc(std::vector<std::size_t>{3, 2, 1, 0}, t), 0.0);
  EXPECT_EQ(eval_pc(std::vector<std::size_t>{0, 1, 0, 0}, t), 0.5);
  Rng rng = make_rng(53);
  std::vector<std::size_t> truth(20000), guess(20000);
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = uniform_index(rng, 4), guess[i] = uniform_index(rng, 4);
  EXPECT_NEAR(eval_pc(guess, truth), 0.25, 0.02);
  EXPECT_THROW(eval_pc(guess, std::vector<std::size_t>{0}), InvalidArgument);
}

TEST(Canonical, EveryFitterReturnsAscendingMeans) {
  const auto t = four_level_trace(-4.0, 1000, 500, 54);
  Rng rng = make_rng(54, 1);
  expect_canonical(fit_ccdpgmm(t.energies, DpOptions{}, rng).gmm);
  expect_canonical(fit_emgmm(t.energies, 4, EmOptions{}, rng));
  const auto ms = fit_meanshift(t.energies, silverman_bandwidth(t.energies));
  for (std::size_t j = 1; j < ms.modes.size(); ++j) EXPECT_LT(ms.modes[j - 1], ms.modes[j]);
  expect_canonical(gmm_from_assignments(t.energies, ms.assignments, ms.modes.size(), 1e-12));
}

// Per-window MAP with the true model against the blind fitters at the same operating point.
TEST(Dominance, KnownModelBeatsBlindFitters) {
  std::vector<double> diff_dp, diff_em;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = four_level_trace(-8.0, 1000, 500, 200 + seed);
    const std::vector<double> priors(4, 0.25);
    const auto th = map_thresholds(t.powers, priors, 1.0, 500);
    std::vector<std::size_t> known;
    for (double e : t.energies) known.push_back(classify_by_thresholds(th, e));
    const double pc_known = eval_pc(known, t.levels);

    Rng rng = make_rng(200 + seed, 3);
    const auto dp = fit_ccdpgmm(t.energies, DpOptions{}, rng);
    const auto em = fit_emgmm(t.energies, 4, EmOptions{}, rng);
    const DwellModel none{std::vector<double>(em.k(), 0.0), std::vector<double>(em.k(), 1.0)};
    diff_dp.push_back(pc_known - eval_pc(levels_of(predict_sequence(dp.gmm, dp.dwell, t.energies, PredictionMode::kPerWindow)), t.levels));
    diff_em.push_back(pc_known - eval_pc(levels_of(predict_sequence(em, none, t.energies, PredictionMode::kPerWindow)), t.levels));
  }
  for (const auto* d : {&diff_dp, &diff_em}) {
    const auto s = summarize(*d);
    EXPECT_GE(s.mean, -s.ci95) << s.mean;
  }
}

TEST(Monotone, AccuracyRisesWithSnr) {
  const std::vector<double> grid{-12.0, -8.0, -4.0, 0.0, 4.0};
  std::vector<Summary> pcs;
  for (double g : grid) {
    std::vector<double> pc;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t = four_level_trace(g, 1000, 500, 300 + seed);
      Rng rng = make_rng(300 + seed, 4);
      const auto dp = fit_ccdpgmm(t.energies, DpOptions{}, rng);
      pc.push_back(eval_pc(levels_of(predict_sequence(dp.gmm, dp.dwell, t.energies, PredictionMode::kDwellAware)), t.levels));
    }
    pcs.push_back(summarize(pc));
  }
  int inversions = 0;
  for (std::size_t i = 1; i < pcs.size(); ++i)
    if (pcs[i].mean + pcs[i].ci95 < pcs[i - 1].mean - pcs[i - 1].ci95) ++inversions;
  EXPECT_LE(inversions, 1);
  EXPECT_GT(pcs.back().mean, pcs.front().mean);
}

TEST(Output, FitTomlAndPredictionCsv) {
  GmmFit fit;
  fit.weights = {0.4, 0.6};
  fit.means = {1.0, 2.0};
  fit.variances = {0.1, 0.2};
  const DwellModel dwell{{0.5, 0.9}, {2, 10}};
  const auto doc = toml::parse(fit_toml(fit, dwell));
  EXPECT_EQ(doc.root["k"], 2);
  EXPECT_EQ(doc.root["means"][1].get<double>(), 2.0);
  EXPECT_EQ(doc.root["dwell_continuation"][1].get<double>(), 0.9);

  const std::vector<double> e{1.0, 2.0};
  const auto preds = predict_sequence(fit, dwell, e, PredictionMode::kPerWindow);
  std::ostringstream out;
  write_prediction_csv(out, preds, std::vector<std::size_t>{0, 1});
  const auto csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "slot,true_level,pred_level,posterior0,posterior1");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
