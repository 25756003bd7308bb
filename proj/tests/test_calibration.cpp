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
#include <cmath>

#include <gtest/gtest.h>

#include "satc/bundle.hpp"
#include "satc/calibration.hpp"
#include "satc/error.hpp"
#include "support.hpp"

using namespace satc;

namespace {

// Two classes over 34 documents. With sigma = 1 the memberships are ~0/1 and
// the expected positives are (18, 8); with sigma = 1e-6 they are ~1/2 except
// for the padding scores, giving (17, 13). Positives are (20, 10).
CvScores two_candidate_instance() {
  std::vector<DocId> docs;
  std::vector<double> values;
  for (int i = 0; i < 34; ++i) {
    docs.emplace_back(fmt::format("t{:02}", i));
    const double s1 = i < 18 ? 50.0 : -50.0;
    const double s2 = i < 8 ? 50.0 : (i < 26 ? -50.0 : -1e12);
    values.push_back(s1);
    values.push_back(s2);
  }
  CvScores cv;
  for (int i = 0; i < 20; ++i) cv.labels.add(docs[i], ClassId("c1"));
  for (int i = 0; i < 10; ++i) cv.labels.add(docs[i], ClassId("c2"));
  cv.scores = ScoreMatrix(docs, {ClassId("c1"), ClassId("c2")}, values);
  return cv;
}

}  // namespace

TEST(Probabilities, Shape) {
  const CalibrationModel m{2.0};
  EXPECT_EQ(misclassification_probability(0.0, m), 0.5);
  EXPECT_EQ(membership_probability(0.0, m), 0.5);
  EXPECT_DOUBLE_EQ(misclassification_probability(1.0, m), 1.0 / (1.0 + std::exp(2.0)));
  EXPECT_EQ(misclassification_probability(1.0, m), misclassification_probability(-1.0, m));
  EXPECT_DOUBLE_EQ(membership_probability(1.5, m) + membership_probability(-1.5, m), 1.0);
  // Very confident scores underflow to zero instead of producing NaN.
  EXPECT_EQ(misclassification_probability(1e300, m), 0.0);
  EXPECT_EQ(membership_probability(-1e300, m), 0.0);
  EXPECT_EQ(membership_probability(1e300, m), 1.0);
}

TEST(Probabilities, ErrorProbabilityIsOneMinusMembershipOfTheDecision) {
  const CalibrationModel m{0.7};
  for (double s : {-4.0, -0.3, 0.2, 3.0}) {
    const double member = membership_probability(s, m);
    const double wrong = s > 0 ? 1.0 - member : member;
    EXPECT_NEAR(misclassification_probability(s, m), wrong, 1e-15);
  }
}

TEST(CalibrationModel, RejectsNonPositiveSigma) {
  EXPECT_THROW(CalibrationModel{0.0}.check(), ConfigError);
  EXPECT_THROW(CalibrationModel{-1.0}.check(), ConfigError);
  EXPECT_THROW(CalibrationModel{INFINITY}.check(), ConfigError);
}

TEST(Grid, LogSpacedEndpoints) {
  const auto g = CalibrationGrid::standard();
  ASSERT_EQ(g.candidates.size(), 100u);
  EXPECT_DOUBLE_EQ(g.candidates.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.candidates.back(), 1e3);
  for (std::size_t i = 1; i < g.candidates.size(); ++i) {
    EXPECT_NEAR(std::log10(g.candidates[i]) - std::log10(g.candidates[i - 1]), 6.0 / 99.0, 1e-12);
  }
  EXPECT_THROW(CalibrationGrid::log_spaced(0, 1, 2), ConfigError);
  EXPECT_THROW(CalibrationGrid::log_spaced(3, 0, 2), ConfigError);
  EXPECT_THROW(CalibrationGrid{}.check(), ConfigError);
}

TEST(Residuals, HandValues) {
  const std::vector<double> pos = {20, 10};
  EXPECT_DOUBLE_EQ(macro_residual(pos, std::vector<double>{18, 8}), 2.0);
  EXPECT_DOUBLE_EQ(macro_residual(pos, std::vector<double>{17, 13}), 3.0);
  EXPECT_DOUBLE_EQ(micro_residual(pos, std::vector<double>{18, 8}), 4.0);
  EXPECT_DOUBLE_EQ(micro_residual(pos, std::vector<double>{17, 13}), 0.0);
}

TEST(Calibrate, MacroAndMicroObjectivesPickDifferentCandidates) {
  const auto cv = two_candidate_instance();
  EXPECT_EQ(positive_counts(cv), (std::vector<double>{20, 10}));
  const auto ea = expected_positives(cv, 1.0);
  const auto eb = expected_positives(cv, 1e-6);
  EXPECT_NEAR(ea[0], 18, 1e-9);
  EXPECT_NEAR(ea[1], 8, 1e-9);
  EXPECT_NEAR(eb[0], 17, 1e-3);
  EXPECT_NEAR(eb[1], 13, 1e-3);
  const CalibrationGrid grid{{1e-6, 1.0}};
  EXPECT_EQ(calibrate_sigma_macro(cv, grid).sigma, 1.0);
  EXPECT_EQ(calibrate_sigma_micro(cv, grid).sigma, 1e-6);
}

TEST(Calibrate, TiesGoToTheSmallestSigma) {
  // All scores are so large that every candidate yields identical residuals.
  CvScores cv;
  cv.scores = ScoreMatrix({DocId("a"), DocId("b")}, {ClassId("c")}, {1e300, -1e300});
  cv.labels.add(DocId("a"), ClassId("c"));
  const CalibrationGrid grid{{5.0, 2.0, 3.0}};
  EXPECT_EQ(calibrate_sigma_macro(cv, grid).sigma, 2.0);
  EXPECT_EQ(calibrate_sigma_micro(cv, grid).sigma, 2.0);
}

TEST(Calibrate, GridSearchMatchesExhaustiveMinimum) {
  SyntheticSpec spec;
  spec.train_docs = 300;
  spec.test_docs = 1;
  spec.seed = 11;
  const auto b = make_synthetic_bundle(spec);
  const auto grid = CalibrationGrid::log_spaced(40, 0.01, 100);
  const auto pos = positive_counts(*b.cv);
  double best = INFINITY;
  for (double s : grid.candidates) best = std::min(best, macro_residual(pos, expected_positives(*b.cv, s)));
  const double chosen = calibrate_sigma_macro(*b.cv, grid).sigma;
  EXPECT_EQ(macro_residual(pos, expected_positives(*b.cv, chosen)), best);
}

TEST(Calibrate, RecoversTheGeneratingGrowthRateRoughly) {
  SyntheticSpec spec;
  spec.train_docs = 20000;
  spec.test_docs = 1;
  spec.classes = 3;
  spec.true_sigma = 2.0;
  spec.seed = 3;
  const auto b = make_synthetic_bundle(spec);
  const double sigma = calibrate_sigma_micro(*b.cv, CalibrationGrid::standard()).sigma;
  EXPECT_GT(sigma, 1.0);
  EXPECT_LT(sigma, 4.0);
}
