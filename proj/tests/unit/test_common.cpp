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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sir/common/error.hpp"
#include "sir/common/random.hpp"
#include "sir/common/stats.hpp"
#include "sir/common/toml.hpp"

using namespace sir;

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a = make_rng(7, 1), b = make_rng(7, 1), c = make_rng(7, 2), d = make_rng(8, 1);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Random, DirichletIsOnTheSimplexAndRespectsZeros) {
  Rng rng = make_rng(3);
  const std::vector<double> conc{0.5, 0.0, 2.0, 1e-3};
  for (int i = 0; i < 200; ++i) {
    const auto p = sample_dirichlet(conc, rng);
    double total = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(p[1], 0.0);
  }
}

TEST(Stats, SummaryMatchesHandComputation) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const Summary s = summarize(xs);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.ci95, 1.959963984540054 * std::sqrt((5.0 / 3.0) / 4.0), 1e-12);
  EXPECT_EQ(summarize(std::vector<double>{5.0}).ci95, 0.0);
  EXPECT_DOUBLE_EQ(variance_mle(xs), 1.25);
}

TEST(Stats, InverseQRoundTrips) {
  for (double p : {1e-6, 0.01, 0.1, 0.5, 0.9, 0.999}) EXPECT_NEAR(1.0 - normal_cdf(inverse_q(p)), p, 1e-12);
  EXPECT_THROW(inverse_q(0.0), InvalidArgument);
  EXPECT_THROW(inverse_q(1.0), InvalidArgument);
}

TEST(Stats, LogSumExpIsStable) {
  const std::vector<double> xs{-1000.0, -1000.0};
  EXPECT_NEAR(log_sum_exp(xs), -1000.0 + std::log(2.0), 1e-12);
}

TEST(Toml, ParsesScalarsArraysAndTables) {
  const auto doc = toml::parse(R"(
# comment
name = "x"   # trailing
count = 0x10
ratio = 1.5e-1
flag = true
list = [1, 2,
        3,]
"quoted key" = 'lit\eral'
[table.sub]
v = -inf
[[items]]
a = 1
[[items]]
a = 2
inline = { p = [1.0, 2.0], q = "s" }
)",
                               "t.toml");
  const auto& r = doc.root;
  EXPECT_EQ(r["name"], "x");
  EXPECT_EQ(r["count"], 16);
  EXPECT_DOUBLE_EQ(r["ratio"].get<double>(), 0.15);
  EXPECT_TRUE(r["flag"].get<bool>());
  EXPECT_EQ(r["list"].size(), 3U);
  EXPECT_EQ(r["quoted key"], "lit\\eral");
  EXPECT_TRUE(std::isinf(r["table"]["sub"]["v"].get<double>()));
  ASSERT_EQ(r["items"].size(), 2U);
  EXPECT_EQ(r["items"][1]["inline"]["q"], "s");
  EXPECT_EQ(doc.line_of("/items/1/a"), 15);
  EXPECT_EQ(doc.line_of("/list"), 7);
}

TEST(Toml, ErrorsCarrySourceAndLine) {
  try {
    toml::parse("a = 1\nb = [1, 2\nc = 3\n", "bad.toml");
    FAIL() << "expected a parse error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.toml:"), std::string::npos);
  }
  EXPECT_THROW(toml::parse("a = 1\na = 2\n"), ValidationError);
  EXPECT_THROW(toml::parse("d = 1979-05-27\n"), ValidationError);
  EXPECT_THROW(toml::parse("s = \"\"\"multi\"\"\"\n"), ValidationError);
}

TEST(Toml, DumpRoundTrips) {
  toml::Json root = toml::Json::object();
  root["n"] = 3;
  root["xs"] = {0.1, 2.0, -3.5};
  root["s"] = "a \"quoted\" string";
  root["t"] = {{"k", true}};
  root["rows"] = toml::Json::array({{{"x", 1.0}}, {{"x", 2.0}}});
  const auto back = toml::parse(toml::dump(root)).root;
  EXPECT_EQ(back["n"], 3);
  EXPECT_EQ(back["xs"][0].get<double>(), 0.1);
  EXPECT_EQ(back["s"], root["s"]);
  EXPECT_TRUE(back["t"]["k"].get<bool>());
  EXPECT_EQ(back["rows"][1]["x"].get<double>(), 2.0);
}
