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
#include <functional>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sir/access/env.hpp"
#include "sir/access/experiment.hpp"
#include "sir/access/gp.hpp"
#include "sir/access/gprl.hpp"
#include "sir/access/nnq.hpp"
#include "sir/access/policies.hpp"
#include "sir/common/error.hpp"
#include "sir/common/stats.hpp"
#include "sir/common/toml.hpp"
#include "sir/rf/markov.hpp"

using namespace sir;
using namespace sir::access;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Eigen::VectorXd random_point(Rng& rng, Eigen::Index dim, double scale) {
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = scale * (2 * uniform01(rng) - 1);
  return v;
}

// Two channels in antiphase subsets that swap state every slot.
rf::MarkovChannelSet period_two_env() { return rf::MarkovChannelSet({0, 1}, 1.0, 0.0, {true, false}); }

template <typename Act>
double greedy_accuracy(std::size_t history, Act act) {
  auto env = period_two_env();
  Rng rng = make_rng(77);
  HistoryState h(history);
  double hits = 0;
  const int slots = 500;
  for (int t = 0; t < slots; ++t) {
    const std::size_t a = act(h, rng);
    const auto s = env_step(env, a, rng);
    hits += s.reward;
    h.push(a, s.observation);
  }
  return hits / slots;
}

}  // namespace

TEST(Env, DeterministicChains) {
  rf::MarkovChannelSet always({0, 0}, 1.0, 1.0, {true});
  rf::MarkovChannelSet never({0, 0}, 0.0, 0.0, {false});
  Rng rng = make_rng(70);
  for (int t = 0; t < 200; ++t) {
    EXPECT_EQ(env_step(always, t % 2, rng).reward, 1.0);
    const auto s = env_step(never, t % 2, rng);
    EXPECT_EQ(s.reward, 0.0);
    EXPECT_EQ(s.observation, Obs::kOccupied);
  }
  EXPECT_THROW(env_step(always, 2, rng), InvalidArgument);
}

TEST(Env, ObservationPrecedesTransition) {
  auto env = period_two_env();
  Rng rng = make_rng(71);
  const auto s = env_step(env, 0, rng);
  EXPECT_EQ(s.observation, Obs::kIdle);
  EXPECT_FALSE(env.idle(0));
  EXPECT_TRUE(env.idle(1));
}

TEST(Env, RandomPolicyEarnsTheStationaryRate) {
  Rng rng = make_rng(72);
  auto env = rf::make_markov_channel_set(16, 4, 0.2, 0.9, rng);
  double total = 0;
  const int slots = 100000;
  for (int t = 0; t < slots; ++t) total += env_step(env, std::uniform_int_distribution<std::size_t>(0, 15)(rng), rng).reward;
  EXPECT_NEAR(total / slots, rf::stationary_idle(0.2, 0.9), 0.01);
}

TEST(Encode, Examples) {
  HistoryState h(1);
  h.push(0, Obs::kIdle);
  const auto v = encode_history(h, 2, 1);
  EXPECT_EQ(v, vec({1, 0, 0, 1}));
  HistoryState empty(3);
  EXPECT_TRUE(encode_window(empty, 4).isZero());
  HistoryState two(2);
  two.push(1, Obs::kOccupied);
  two.push(0, Obs::kIdle);
  EXPECT_EQ(encode_history(two, 2, 0), vec({1, 0, 0, -1, 1, 0}));
  EXPECT_EQ(encode_history(two, 2, 0), encode_history(two, 2, 0));
  EXPECT_THROW(encode_history(two, 2, 2), InvalidArgument);
}

TEST(Belief, UpdateExamplesAndContraction) {
  EXPECT_DOUBLE_EQ(belief_update(1.0, 0.2, 0.9, Obs::kNone), 0.9);
  EXPECT_EQ(belief_update(0.1, 0.2, 0.9, Obs::kIdle), 0.9);
  EXPECT_EQ(belief_update(0.7, 0.2, 0.9, Obs::kOccupied), 0.2);
  double a = 0.0, b = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double na = belief_update(a, 0.2, 0.9, Obs::kNone), nb = belief_update(b, 0.2, 0.9, Obs::kNone);
    EXPECT_LE(std::abs(na - nb), 0.7 * std::abs(a - b) + 1e-15);
    EXPECT_GE(na, 0.0);
    EXPECT_LE(nb, 1.0);
    a = na, b = nb;
  }
  EXPECT_NEAR(a, 2.0 / 3.0, 1e-12);
  EXPECT_THROW(belief_update(1.5, 0.2, 0.9, Obs::kNone), InvalidArgument);
}

TEST(Gp, EmptyPriorAndInterpolation) {
  GpQModel gp;
  const auto p = gp.predict(vec({0.3, -0.2}));
  EXPECT_EQ(p.mean, 0.0);
  EXPECT_EQ(p.variance, 1.0);
  GpHypers tight;
  tight.noise = 1e-12;
  GpQModel one(tight);
  EXPECT_TRUE(one.update(vec({1.0, 2.0}), 3.5));
  EXPECT_NEAR(one.predict(vec({1.0, 2.0})).mean, 3.5, 1e-6);
}

TEST(Gp, MatchesDenseSolve) {
  Rng rng = make_rng(73);
  GpHypers hy;
  hy.lengthscale = 0.8;
  hy.signal_var = 1.7;
  hy.noise = 0.05;
  GpQModel gp(hy);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  for (int i = 0; i < 5; ++i) {
    xs.push_back(random_point(rng, 3, 2.0));
    ys.push_back(2 * uniform01(rng) - 1);
    ASSERT_TRUE(gp.update(xs.back(), ys.back()));
  }
  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(ys.data(), 5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_point(rng, 3, 2.0);
    const auto want = oracle::gp_dense(xs, y, hy, x);
    const auto p = gp.predict(x);
    EXPECT_NEAR(p.mean, want.mean, 1e-8);
    EXPECT_NEAR(p.variance, want.variance, 1e-8);
  }
  Eigen::MatrixXd reg(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) reg(i, j) = gp.kernel(xs[i], xs[j]) + (i == j ? hy.noise : 0.0);
  const Eigen::MatrixXd l = gp.regularized_factor();
  EXPECT_LT((l * l.transpose() - reg).norm(), 1e-10);
}

TEST(Gp, NoveltyAndBudget) {
  GpHypers hy;
  hy.budget = 20;
  GpQModel gp(hy);
  gp.update(vec({0, 0}), 1.0);
  gp.update(vec({3, 0}), 0.5);
  EXPECT_FALSE(gp.update(vec({0, 0}), 2.0));
  EXPECT_EQ(gp.size(), 2U);
  EXPECT_TRUE(gp.update(vec({50, 50}), 0.0));
  EXPECT_EQ(gp.size(), 3U);
  Rng rng = make_rng(74);
  for (int i = 0; i < 10 * 20; ++i) {
    gp.update(random_point(rng, 2, 40.0), uniform01(rng));
    ASSERT_LE(gp.size(), 20U);
  }
  EXPECT_EQ(gp.size(), 20U);
}

TEST(Gp, VarianceInvariants) {
  Rng rng = make_rng(75);
  GpQModel gp;
  for (int i = 0; i < 30; ++i) gp.update(random_point(rng, 4, 1.5), uniform01(rng));
  const double far = gp.predict(Eigen::VectorXd::Constant(4, 100.0)).variance;
  for (const auto& p : gp.dictionary()) {
    const double v = gp.predict(p).variance;
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, far);
  }
  for (int i = 0; i < 50; ++i) EXPECT_GE(gp.predict(random_point(rng, 4, 3.0)).variance, 0.0);
}

TEST(Gp, SnapshotToml) {
  GpQModel gp;
  gp.update(vec({0, 1}), 0.5);
  gp.update(vec({4, 1}), -0.5);
  const auto doc = toml::parse(gp_snapshot_toml(gp));
  EXPECT_EQ(doc.root["dictionary_size"], 2);
  EXPECT_EQ(doc.root["coefficients"].size(), 2U);
  EXPECT_EQ(doc.root["kernel"]["lengthscale"].get<double>(), 1.0);
  EXPECT_EQ(doc.root["budget"], 300);
}

TEST(GprlAct, GreedyArgmaxTiesAndExploration) {
  const std::size_t n = 3;
  HistoryState h(2);
  h.push(1, Obs::kIdle);
  GpQModel gp;
  Rng rng = make_rng(76);
  EXPECT_EQ(gprl_act(gp, h, n, 0.0, rng), 0U);  // all means zero
  gp.update(encode_history(h, n, 0), 0.1);
  gp.update(encode_history(h, n, 1), 0.2);
  gp.update(encode_history(h, n, 2), 0.9);
  EXPECT_EQ(gprl_act(gp, h, n, 0.0, rng), 2U);

  // A positive rescaling of every target rescales every mean.
  GpQModel scaled;
  scaled.update(encode_history(h, n, 0), 0.3);
  scaled.update(encode_history(h, n, 1), 0.6);
  scaled.update(encode_history(h, n, 2), 2.7);
  EXPECT_EQ(gprl_act(scaled, h, n, 0.0, rng), gprl_act(gp, h, n, 0.0, rng));

  std::vector<double> freq(n, 0.0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) freq[gprl_act(gp, h, n, 1.0, rng)] += 1;
  double chi2 = 0;
  for (double f : freq) chi2 += (f - draws / 3.0) * (f - draws / 3.0) / (draws / 3.0);
  EXPECT_LT(chi2, 9.21);  // chi-square(2) upper 1% point
  EXPECT_THROW(gprl_act(gp, h, n, 1.5, rng), InvalidArgument);
}

TEST(Gprl, LearnsThePeriodTwoPattern) {
  LearningSchedule sched;
  sched.spans = 20;
  Rng env_rng = make_rng(78), agent_rng = make_rng(79);
  auto [agent, res] = gprl_train(period_two_env(), sched, GpHypers{}, env_rng, agent_rng);
  EXPECT_EQ(res.curve.size(), 20U);
  EXPECT_LE(agent.model().size(), GpHypers{}.budget);
  const double acc = greedy_accuracy(sched.history, [&](const HistoryState& h, Rng& rng) { return agent.act(h, 0.0, rng); });
  EXPECT_GE(acc, 0.95);
}

TEST(Nnq, LearnsThePeriodTwoPattern) {
  LearningSchedule sched;
  sched.spans = 20;
  Rng env_rng = make_rng(80), agent_rng = make_rng(81);
  auto [agent, res] = nnq_train(period_two_env(), sched, NnqConfig{}, env_rng, agent_rng);
  const double acc = greedy_accuracy(sched.history, [&](const HistoryState& h, Rng& rng) { return nnq_act(agent, h, 2, 0.0, rng); });
  EXPECT_GE(acc, 0.9);
}

TEST(Nnq, OneStepReducesBatchLoss) {
  Rng rng = make_rng(82);
  Mlp net(6, 16, 3, rng);
  Eigen::MatrixXd x(6, 8);
  for (Eigen::Index j = 0; j < 8; ++j) x.col(j) = random_point(rng, 6, 1.0);
  std::vector<std::size_t> actions{0, 1, 2, 0, 1, 2, 0, 1};
  Eigen::VectorXd targets = Eigen::VectorXd::LinSpaced(8, -1.0, 1.0);
  const double before = net.loss(x, actions, targets);
  EXPECT_DOUBLE_EQ(net.train_step(x, actions, targets, 1e-3), before);
  EXPECT_LT(net.loss(x, actions, targets), before);
  EXPECT_TRUE(net.finite());
}

TEST(Whittle, MatchesSubsidyOracleAndIsMonotone) {
  const double p01 = 0.2, p11 = 0.9, beta = 0.9;
  double prev = -1;
  for (int i = 0; i <= 20; ++i) {
    const double w = i / 20.0;
    const double idx = whittle_index(w, p01, p11, beta);
    EXPECT_GE(idx, prev - 1e-12) << w;
    prev = idx;
    if (i % 4 == 1) {
      EXPECT_NEAR(idx, oracle::whittle_subsidy(w, p01, p11, beta), 0.02) << w;
    }
  }
}

TEST(Whittle, ActExamples) {
  EXPECT_EQ(whittle_act(std::vector<double>{0.3, 0.9}, 0.2, 0.9, 0.9), 1U);
  EXPECT_EQ(whittle_act(std::vector<double>{0.5, 0.5, 0.5}, 0.2, 0.9, 0.9), 0U);
  EXPECT_EQ(whittle_act(std::vector<double>{0.9, 0.3}, 0.2, 0.9, 0.9, {{3, 1}, {0, 2}}), 1U);
  EXPECT_EQ(whittle_act(std::vector<double>{0.3, 0.9}, 0.9, 0.2, 0.9), 1U);  // myopic fallback
}

TEST(Optimal, MatchesExhaustiveTreeSearch) {
  for (auto [p01, p11] : {std::pair{0.2, 0.9}, std::pair{0.1, 0.5}, std::pair{0.4, 0.6}})
    for (auto b : {std::array<double, 2>{2.0 / 3, 2.0 / 3}, std::array<double, 2>{0.9, 0.3}, std::array<double, 2>{0.25, 0.6}}) {
      EXPECT_NEAR(oracle::tree_value(b, 6, p01, p11, false), oracle::tree_value(b, 6, p01, p11, true), 1e-9) << p01 << " " << p11;
    }
  rf::MarkovChannelSet env({1, 0, 1}, 0.2, 0.9, {true, true});
  EXPECT_EQ(optimal_act(std::vector<double>{0.3, 0.9}, env), 0U);
  EXPECT_EQ(optimal_act(std::vector<double>{0.9, 0.3}, env), 1U);
}

TEST(EvalAccuracy, ExamplesAndTraceCsv) {
  EpisodeTrace all_idle, none_idle;
  for (std::size_t t = 0; t < 10; ++t) {
    all_idle.push_back({t, Phase::kTesting, 0, true, 1.0});
    none_idle.push_back({t, Phase::kTesting, 0, false, 0.0});
  }
  EXPECT_EQ(eval_accuracy(all_idle), 1.0);
  EXPECT_EQ(eval_accuracy(none_idle), 0.0);
  EXPECT_THROW(eval_accuracy(all_idle, Phase::kLearning), InvalidArgument);
  std::ostringstream out;
  write_trace_csv(out, all_idle);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "slot,phase,action,idle,reward");
  EXPECT_NE(out.str().find("\n3,testing,0,1,1\n"), std::string::npos);
}

TEST(Policies, FairCoinDefeatsEveryPolicy) {
  AccessConfig cfg;
  cfg.p01 = cfg.p11 = 0.5;
  cfg.test_spans = 200;  // 10^4 slots
  const auto run = run_access(cfg, 5, {Method::kOptimal, Method::kWhittle, Method::kRandom});
  for (const auto& o : run.outcomes) EXPECT_NEAR(o.accuracy, 0.5, 0.02) << method_name(o.method);
}

TEST(Policies, SingleSubsetWhittleEqualsOptimal) {
  AccessConfig cfg;
  cfg.n_subsets = 1;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto run = run_access(cfg, seed, {Method::kOptimal, Method::kWhittle});
    EXPECT_EQ(run.outcome(Method::kOptimal).accuracy, run.outcome(Method::kWhittle).accuracy);
  }
}

TEST(Policies, DominanceOverTwentySeeds) {
  AccessConfig cfg;
  cfg.n_subsets = 8;
  std::vector<double> opt_minus_wi, wi_minus_random;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto run = run_access(cfg, 1000 + seed, {Method::kOptimal, Method::kWhittle, Method::kRandom});
    opt_minus_wi.push_back(run.outcome(Method::kOptimal).accuracy - run.outcome(Method::kWhittle).accuracy);
    wi_minus_random.push_back(run.outcome(Method::kWhittle).accuracy - run.outcome(Method::kRandom).accuracy);
  }
  const auto a = summarize(opt_minus_wi), b = summarize(wi_minus_random);
  EXPECT_GE(a.mean + a.ci95, 0.0);
  EXPECT_GT(b.mean - b.ci95, 0.0);
}

TEST(Gprl, SingleSubsetIsNearOptimal) {
  AccessConfig cfg;
  cfg.n_subsets = 1;
  std::vector<double> gap;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto run = run_access(cfg, 2000 + seed, {Method::kOptimal, Method::kGprl});
    gap.push_back(run.outcome(Method::kOptimal).accuracy - run.outcome(Method::kGprl).accuracy);
    EXPECT_LE(run.gp_dictionary, cfg.gp.budget);
  }
  EXPECT_LE(mean(gap), 0.05);
}
