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

#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "sir/common/error.hpp"
#include "sir/common/stats.hpp"
#include "sir/rf/dataset.hpp"
#include "sir/rf/markov.hpp"
#include "sir/rf/power_process.hpp"
#include "sir/rf/scenario.hpp"
#include "sir/rf/sensing.hpp"

using namespace sir;
using namespace sir::rf;

namespace {

PuNode four_level(double dwell) {
  PuNode pu;
  pu.position = {1, 1};
  pu.power_levels = {0.0, 1.0, 2.0, 3.0};
  pu.level_priors = {0.25, 0.25, 0.25, 0.25};
  pu.mean_dwell = dwell;
  return pu;
}

}  // namespace

TEST(PowerProcess, LevelFrequenciesFollowPriors) {
  Rng rng = make_rng(1);
  // About 20000 segments, so each frequency has sd ~0.004.
  const auto lv = sample_power_process(four_level(50), 1000000, rng);
  ASSERT_EQ(lv.size(), 1000000U);
  std::array<double, 4> freq{};
  for (auto l : lv) freq[l] += 1.0 / 1e6;
  for (double f : freq) EXPECT_NEAR(f, 0.25, 0.02);
}

TEST(PowerProcess, SingleLevelIsConstant) {
  PuNode pu;
  pu.power_levels = {2.0};
  pu.level_priors = {1.0};
  pu.mean_dwell = 7;
  Rng rng = make_rng(2);
  for (auto l : sample_power_process(pu, 1000, rng)) EXPECT_EQ(l, 0U);
}

TEST(PowerProcess, UnitDwellGivesIndependentLevels) {
  Rng rng = make_rng(3);
  const auto lv = sample_power_process(four_level(1), 40000, rng);
  double table[4][4] = {};
  for (std::size_t t = 1; t < lv.size(); ++t) table[lv[t - 1]][lv[t]] += 1;
  const double n = static_cast<double>(lv.size() - 1);
  double rows[4] = {}, cols[4] = {};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rows[i] += table[i][j], cols[j] += table[i][j];
  double chi2 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double e = rows[i] * cols[j] / n;
      chi2 += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  EXPECT_LT(chi2, 21.666);  // chi-square(9) upper 1% point
}

TEST(PowerProcess, SegmentMeanMatchesDwell) {
  for (double dwell : {5.0, 20.0, 50.0}) {
    Rng rng = make_rng(4, static_cast<std::uint64_t>(dwell));
    const auto segs = sample_power_segments(four_level(dwell), static_cast<std::size_t>(200 * dwell), rng);
    double total = 0;
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) total += static_cast<double>(segs[i].length);
    EXPECT_NEAR(total / static_cast<double>(segs.size() - 1), dwell, 0.15 * dwell) << dwell;
  }
}

TEST(PowerProcess, RejectsZeroHorizon) {
  Rng rng = make_rng(5);
  EXPECT_THROW(sample_power_process(four_level(3), 0, rng), InvalidArgument);
}

TEST(Sensing, NoiseOnlyMean) {
  Rng rng = make_rng(6);
  EXPECT_NEAR(sense_window(0.0, 1.0, 100000, rng), 1.0, 0.02);
}

TEST(Sensing, MeanAndVarianceMatchClosedForm) {
  Rng rng = make_rng(7);
  std::vector<double> t(10000);
  for (auto& x : t) x = sense_window(3.0, 1.0, 50, rng);
  EXPECT_NEAR(mean(t), 4.0, 3 * 4.0 / std::sqrt(50.0 * 1e4));
  EXPECT_NEAR(variance_unbiased(t), 16.0 / 50.0, 0.1 * 16.0 / 50.0);
}

TEST(Sensing, MeanWithinThreeStandardErrorsAcrossParameters) {
  Rng pick = make_rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = 5.0 * uniform01(pick), s2 = 0.1 + 3.0 * uniform01(pick);
    const std::size_t n = 1 + static_cast<std::size_t>(200 * uniform01(pick));
    Rng rng = make_rng(9, static_cast<std::uint64_t>(trial));
    std::vector<double> t(10000);
    for (auto& x : t) x = sense_window(p, s2, n, rng);
    const double se = (p + s2) / std::sqrt(static_cast<double>(n) * 1e4);
    EXPECT_NEAR(mean(t), p + s2, 3 * se) << "P=" << p << " s2=" << s2 << " n=" << n;
  }
}

TEST(Sensing, PreconditionsAreEnforced) {
  Rng rng = make_rng(10);
  EXPECT_THROW(sense_window(1.0, 1.0, 0, rng), InvalidArgument);
  EXPECT_THROW(sense_window(1.0, 0.0, 10, rng), InvalidArgument);
}

TEST(ReceivedPower, DiskCoverageWithInclusiveBoundary) {
  PuNode pu;
  pu.position = {5, 5};
  pu.coverage_radius = 2.2;
  pu.power_levels = {0.0, 2.0};
  pu.level_priors = {0.5, 0.5};
  EXPECT_EQ(received_power_at(pu, 1, {5, 5}), 2.0);
  EXPECT_EQ(received_power_at(pu, 1, {7.2, 5}), 2.0);
  EXPECT_EQ(received_power_at(pu, 1, {8.0, 5}), 0.0);
  EXPECT_THROW(received_power_at(pu, 2, {5, 5}), InvalidArgument);
}

TEST(ReceivedPower, RadiallySymmetric) {
  PuNode pu;
  pu.position = {6, 6};
  pu.coverage_radius = 2.2;
  pu.power_levels = {3.0};
  pu.level_priors = {1.0};
  for (double r : {0.5, 1.7, 2.1, 2.3, 4.0}) {
    const double ref = received_power_at(pu, 0, {6 + r, 6});
    for (int k = 1; k < 16; ++k) {
      const double a = k * 2 * M_PI / 16;
      EXPECT_EQ(received_power_at(pu, 0, {6 + r * std::cos(a), 6 + r * std::sin(a)}), ref) << r << " " << a;
    }
  }
  // On the boundary along the axes.
  for (Point p : {Point{3.8, 6}, Point{8.2, 6}, Point{6, 3.8}, Point{6, 8.2}}) EXPECT_EQ(received_power_at(pu, 0, p), 3.0);
}

TEST(Dataset, NoPusMeansAllIdle) {
  ScenarioConfig cfg;
  cfg.n_channels = 2;
  cfg.sus = {SuTrack{{1, 1}, {10, 10}, 50, 0}};
  Rng rng = make_rng(11);
  const auto d = generate_mapping_dataset(cfg, rng);
  for (auto o : d.truth[0]) EXPECT_EQ(o, 0U);
}

TEST(Dataset, TrackThroughDiskHasTwoTransitions) {
  ScenarioConfig cfg;
  PuNode pu;
  pu.position = {6, 6};
  pu.coverage_radius = 2.2;
  pu.power_levels = {2.0};
  pu.level_priors = {1.0};
  cfg.pus = {pu};
  cfg.sus = {SuTrack{{0.5, 6}, {11.5, 6}, 2000, 0}};
  Rng rng = make_rng(12);
  const auto d = generate_mapping_dataset(cfg, rng);
  int transitions = 0;
  for (std::size_t i = 1; i < d.truth[0].size(); ++i) transitions += d.truth[0][i] != d.truth[0][i - 1];
  EXPECT_EQ(transitions, 2);
  EXPECT_EQ(d.truth[0].front(), 0U);
}

TEST(Dataset, ReferenceScenarioHasSixRegions) {
  const auto cfg = reference_mapping_scenario();
  EXPECT_EQ(cfg.pus.size(), 3U);
  EXPECT_EQ(cfg.sus.size(), 9U);
  Rng rng = make_rng(13);
  const auto d = generate_mapping_dataset(cfg, rng);
  std::set<Occupancy> labels;
  for (const auto& seq : d.truth) labels.insert(seq.begin(), seq.end());
  EXPECT_EQ(labels.size(), 6U);
}

TEST(Dataset, SequencesAreOrderedAlongTracks) {
  const auto cfg = reference_mapping_scenario();
  Rng rng = make_rng(14);
  const auto d = generate_mapping_dataset(cfg, rng);
  for (std::size_t su = 0; su < d.sequences.size(); ++su) {
    const auto& seq = d.sequences[su];
    for (std::size_t i = 1; i < seq.size(); ++i) {
      EXPECT_GT(seq[i].seq_index, seq[i - 1].seq_index);
      EXPECT_GE(distance(seq[i].location, cfg.sus[su].start), distance(seq[i - 1].location, cfg.sus[su].start));
      for (double e : seq[i].energies) EXPECT_GE(e, 0.0);
    }
  }
}

TEST(Dataset, DeterministicForSeed) {
  const auto cfg = reference_mapping_scenario();
  Rng a = make_rng(15), b = make_rng(15);
  std::ostringstream sa, sb;
  write_dataset_csv(sa, generate_mapping_dataset(cfg, a));
  write_dataset_csv(sb, generate_mapping_dataset(cfg, b));
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), "su_id,seq,x_km,y_km,ch0_energy,ch1_energy,ch2_energy,label_bits");
}

TEST(Markov, AbsorbingIdleChain) {
  MarkovChannelSet env({0, 0, 1}, 0.0, 1.0, {true, true});
  Rng rng = make_rng(16);
  for (int t = 0; t < 1000; ++t) {
    env.step(rng);
    for (std::size_t c = 0; c < 3; ++c) ASSERT_TRUE(env.idle(c));
  }
}

TEST(Markov, StationaryIdleFraction) {
  MarkovChannelSet env({0}, 0.2, 0.9, {true});
  Rng rng = make_rng(17);
  double idle = 0;
  for (int t = 0; t < 100000; ++t) {
    markov_channel_step(env, rng);
    idle += env.idle(0);
  }
  EXPECT_NEAR(idle / 1e5, 2.0 / 3.0, 0.01);
  EXPECT_NEAR(stationary_idle(0.2, 0.9), 2.0 / 3.0, 1e-15);
}

TEST(Markov, SubsetsShareStateAndPartitionIsBalanced) {
  Rng rng = make_rng(18);
  for (std::size_t u : {1, 2, 4, 8, 16}) {
    auto env = make_markov_channel_set(16, u, 0.2, 0.9, rng);
    ASSERT_EQ(env.n_subsets(), u);
    for (std::size_t s = 0; s < u; ++s) EXPECT_EQ(env.channels_in(s).size(), 16 / u);
    for (int t = 0; t < 200; ++t) {
      env.step(rng);
      for (std::size_t c = 0; c < 16; ++c)
        for (std::size_t d = 0; d < 16; ++d)
          if (env.subset_of(c) == env.subset_of(d)) {
            ASSERT_EQ(env.idle(c), env.idle(d));
          }
    }
  }
}

TEST(Markov, SingletonSubsetsEvolveIndependently) {
  Rng rng = make_rng(19);
  auto env = make_markov_channel_set(16, 16, 0.5, 0.5, rng);
  double agree = 0;
  const int steps = 20000;
  for (int t = 0; t < steps; ++t) {
    env.step(rng);
    agree += env.idle(0) == env.idle(1);
  }
  EXPECT_NEAR(agree / steps, 0.5, 0.02);
}

TEST(Scenario, ValidationNamesTheField) {
  auto cfg = reference_mapping_scenario();
  cfg.pus[1].power_levels = {0.0, 2.0};
  cfg.pus[1].level_priors = {0.5, 0.4};
  try {
    validate(cfg);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("pus[1].level_priors"), std::string::npos);
  }
  cfg = reference_mapping_scenario();
  cfg.pus[0].power_levels = {0.0, 0.0};
  cfg.pus[0].level_priors = {0.5, 0.5};
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = reference_mapping_scenario();
  cfg.sus[2].end = {13, 1};
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = reference_mapping_scenario();
  cfg.noise_var = 0;
  EXPECT_THROW(validate(cfg), ValidationError);
}
