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

#include "sir/perception/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "sir/common/error.hpp"
#include "sir/common/stats.hpp"
#include "sir/common/toml.hpp"

namespace sir::perception {

LevelPrediction predict_level(const GmmFit& fit, double energy, const DwellModel* dwell, const LevelPrediction* prev) {
  require(fit.k() >= 1, "predict_level: fit has no components");
  require(std::isfinite(energy), "predict_level: non-finite energy");
  const std::size_t k = fit.k();
  double weight_total = 0.0;
  for (double w : fit.weights) weight_total += w;

  std::vector<double> prior(k);
  for (std::size_t j = 0; j < k; ++j) prior[j] = fit.weights[j] / weight_total;
  if (dwell != nullptr && prev != nullptr && prev->posterior.size() == k && dwell->levels() == k) {
    std::vector<double> moved(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const double stay = dwell->continuation[i];
      moved[i] += prev->posterior[i] * stay;
      for (std::size_t j = 0; j < k; ++j) moved[j] += prev->posterior[i] * (1.0 - stay) * prior[j];
    }
    prior = std::move(moved);
  }

  std::vector<double> logs(k);
  for (std::size_t j = 0; j < k; ++j)
    logs[j] = (prior[j] > 0 ? std::log(prior[j]) : -std::numeric_limits<double>::infinity()) +
              normal_log_pdf(energy, fit.means[j], fit.variances[j]);
  double lse = log_sum_exp(logs);
  LevelPrediction out;
  out.posterior.resize(k);
  if (!std::isfinite(lse)) {
    // Every component underflowed: fall back to the per-window likelihood alone.
    for (std::size_t j = 0; j < k; ++j) logs[j] = normal_log_pdf(energy, fit.means[j], fit.variances[j]);
    lse = log_sum_exp(logs);
  }
  for (std::size_t j = 0; j < k; ++j) out.posterior[j] = std::exp(logs[j] - lse);
  out.level = static_cast<std::size_t>(std::distance(logs.begin(), std::max_element(logs.begin(), logs.end())));
  return out;
}

LevelPrediction predict_level(const DpFit& fit, double energy, const LevelPrediction* prev) {
  return predict_level(fit.gmm, energy, &fit.dwell, prev);
}

std::vector<LevelPrediction> predict_sequence(const GmmFit& fit, const DwellModel& dwell,
                                              std::span<const double> energies, PredictionMode mode) {
  std::vector<LevelPrediction> out;
  out.reserve(energies.size());
  for (double e : energies) {
    if (mode == PredictionMode::kDwellAware && !out.empty())
      out.push_back(predict_level(fit, e, &dwell, &out.back()));
    else
      out.push_back(predict_level(fit, e));
  }
  return out;
}

double eval_pc(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
  require(predicted.size() == truth.size(), "eval_pc: length mismatch");
  require(!truth.empty(), "eval_pc: empty sequences");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string fit_toml(const GmmFit& fit, const DwellModel& dwell) {
  require(dwell.levels() == fit.k(), "fit_toml: dwell model and fit disagree on the component count");
  toml::Json root = toml::Json::object();
  root["k"] = fit.k();
  root["weights"] = fit.weights;
  root["means"] = fit.means;
  root["variances"] = fit.variances;
  root["dwell_continuation"] = dwell.continuation;
  return toml::dump(root);
}

void write_prediction_csv(std::ostream& out, std::span<const LevelPrediction> predictions,
                          std::span<const std::size_t> truth) {
  require(predictions.size() == truth.size(), "write_prediction_csv: length mismatch");
  std::size_t width = 0;
  for (const auto& p : predictions) width = std::max(width, p.posterior.size());
  out << "slot,true_level,pred_level";
  for (std::size_t j = 0; j < width; ++j) out << ",posterior" << j;
  out << "\n";
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    out << t << ',' << truth[t] << ',' << predictions[t].level;
    for (std::size_t j = 0; j < width; ++j)
      out << ',' << (j < predictions[t].posterior.size() ? fmt::format("{:.9g}", predictions[t].posterior[j]) : "0");
    out << "\n";
  }
}

}  // namespace sir::perception
