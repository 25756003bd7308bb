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
#pragma once

#include <span>
#include <vector>

#include "satc/model.hpp"

namespace satc {

/// Generalized logistic f(z) = e^{sigma z} / (e^{sigma z} + 1).
struct CalibrationModel {
  double sigma = 1.0;
  void check() const;
};

/// Cross-validated scores of the training documents pooled over all folds,
/// with their true labels.
struct CvScores {
  ScoreMatrix scores;
  LabelSet labels;
  int folds = 10;  // informational
};

/// Candidate growth rates for the grid search.
struct CalibrationGrid {
  std::vector<double> candidates;

  /// `count` points log-spaced over [lo, hi], both ends included.
  static CalibrationGrid log_spaced(std::size_t count, double lo, double hi);
  /// 100 points log-spaced over [1e-3, 1e3].
  static CalibrationGrid standard();
  void check() const;
};

/// Probability that the decision carried by `score` is wrong:
/// 1 - f(|score|) = 1 / (1 + e^{sigma |score|}). In (0, 0.5]; underflows to 0
/// for very confident scores.
double misclassification_probability(double score, const CalibrationModel& model);

/// Probability of membership f(score), using the signed score.
double membership_probability(double score, const CalibrationModel& model);

/// Number of positive labels per class of `cv`, in class order.
std::vector<double> positive_counts(const CvScores& cv);

/// Expected number of positives per class under `sigma`, in class order.
std::vector<double> expected_positives(const CvScores& cv, double sigma);

/// Mean over classes of |positives_j - expected_j|.
double macro_residual(std::span<const double> positives, std::span<const double> expected);
/// |sum_j positives_j - sum_j expected_j|.
double micro_residual(std::span<const double> positives, std::span<const double> expected);

/// Grid candidate minimizing the macro residual; ties go to the smallest sigma.
CalibrationModel calibrate_sigma_macro(const CvScores& cv, const CalibrationGrid& grid);
/// Grid candidate minimizing the micro (global-table) residual.
CalibrationModel calibrate_sigma_micro(const CvScores& cv, const CalibrationGrid& grid);

}  // namespace satc
