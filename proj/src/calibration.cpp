// Copyright 2026 The satc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "satc/calibration.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "satc/error.hpp"

namespace satc {

void CalibrationModel::check() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError(fmt::format("sigma must be positive and finite, got {}", sigma));
  }
}

CalibrationGrid CalibrationGrid::log_spaced(std::size_t count, double lo, double hi) {
  if (count == 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw ConfigError(fmt::format("bad calibration grid spec ({} points over [{}, {}])", count, lo, hi));
  }
  CalibrationGrid grid;
  grid.candidates.reserve(count);
  if (count == 1) {
    grid.candidates.push_back(lo);
    return grid;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    grid.candidates.push_back(std::pow(10.0, a + (b - a) * t));
  }
  return grid;
}

CalibrationGrid CalibrationGrid::standard() { return log_spaced(100, 1e-3, 1e3); }

void CalibrationGrid::check() const {
  if (candidates.empty()) throw ConfigError("calibration grid is empty");
  for (double s : candidates) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError(fmt::format("calibration grid candidate {} is not positive", s));
    }
  }
}

double misclassification_probability(double score, const CalibrationModel& model) {
  // exp overflows to +inf for huge arguments, which correctly yields 0.
  return 1.0 / (1.0 + std::exp(model.sigma * std::fabs(score)));
}

double membership_probability(double score, const CalibrationModel& model) {
  const double z = model.sigma * score;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (e + 1.0);
}

std::vector<double> positive_counts(const CvScores& cv) {
  const auto mask = cv.labels.mask_for(cv.scores);
  const std::size_t nc = cv.scores.num_classes();
  std::vector<double> pos(nc, 0.0);
  for (std::size_t at = 0; at < mask.size(); ++at) pos[at % nc] += mask[at];
  return pos;
}

std::vector<double> expected_positives(const CvScores& cv, double sigma) {
  const CalibrationModel model{sigma};
  const std::size_t nc = cv.scores.num_classes();
  std::vector<double> expected(nc, 0.0);
  for (std::size_t d = 0; d < cv.scores.num_docs(); ++d) {
    for (std::size_t c = 0; c < nc; ++c) {
      expected[c] += membership_probability(cv.scores.score(d, c), model);
    }
  }
  return expected;
}

double macro_residual(std::span<const double> positives, std::span<const double> expected) {
  if (positives.size() != expected.size()) throw DataError("residual: size mismatch");
  if (positives.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < positives.size(); ++j) sum += std::fabs(positives[j] - expected[j]);
  return sum / static_cast<double>(positives.size());
}

double micro_residual(std::span<const double> positives, std::span<const double> expected) {
  if (positives.size() != expected.size()) throw DataError("residual: size mismatch");
  double pos = 0.0, exp = 0.0;
  for (std::size_t j = 0; j < positives.size(); ++j) {
    pos += positives[j];
    exp += expected[j];
  }
  return std::fabs(pos - exp);
}

namespace {

template <class Objective>
CalibrationModel grid_search(const CvScores& cv, const CalibrationGrid& grid, Objective objective) {
  grid.check();
  const auto positives = positive_counts(cv);
  double best_sigma = 0.0;
  double best_value = std::numeric_limits<double>::infinity();
  for (double sigma : grid.candidates) {
    const double value = objective(positives, expected_positives(cv, sigma));
    if (value < best_value || (value == best_value && sigma < best_sigma)) {
      best_value = value;
      best_sigma = sigma;
    }
  }
  return CalibrationModel{best_sigma};
}

}  // namespace

CalibrationModel calibrate_sigma_macro(const CvScores& cv, const CalibrationGrid& grid) {
  return grid_search(cv, grid, [](const auto& p, const auto& e) { return macro_residual(p, e); });
}

CalibrationModel calibrate_sigma_micro(const CvScores& cv, const CalibrationGrid& grid) {
  return grid_search(cv, grid, [](const auto& p, const auto& e) { return micro_residual(p, e); });
}

}  // namespace satc
