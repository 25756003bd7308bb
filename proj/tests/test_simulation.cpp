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
#include <set>

#include <gtest/gtest.h>

#include "satc/error.hpp"
#include "satc/simulation.hpp"
#include "support.hpp"

using namespace satc;
using namespace testing_support;

namespace {

const std::vector<double> kXis = {0.05, 0.1, 0.2};

}  // namespace

TEST(Simulate, TwoDocumentInstance) {
  const ScoreMatrix m({DocId("d1"), DocId("d2")}, {ClassId("c")}, {-1.0, 1.0});
  LabelSet gold;
  gold.add(DocId("d1"), ClassId("c"));
  gold.add(DocId("d2"), ClassId("c"));
  TrainingEstimates est;
  est.counts[ClassId("c")] = {5, 5, 5, std::nullopt};
  est.train_size = 10;
  est.test_size = 2;
  for (auto strategy : {Strategy::static_ranking, Strategy::dynamic_ranking}) {
    const auto cfg = make_config({Method::utheoretic, strategy, Averaging::macro, {}}, CalibrationModel{1.0}, &est,
                                 &gold);
    const auto run = simulate(m, gold, cfg, std::vector<double>{1.0});
    EXPECT_EQ(run.visit_order.front(), DocId("d1"));
    EXPECT_EQ(run.macro.er, (std::vector<double>{0, 1, 1}));
    EXPECT_EQ(run.micro.er, (std::vector<double>{0, 1, 1}));
  }
}

TEST(Simulate, Oracle2PutsMisclassifiedDocumentsFirst) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto in = random_instance(seed, 40, 3, 0.05);
    for (auto strategy : {Strategy::static_ranking, Strategy::dynamic_ranking}) {
      const auto run =
          simulate(in.scores, in.gold, library_config(in, Method::oracle2, strategy, Averaging::micro, 1.0), kXis);
      bool seen_correct = false;
      for (const auto& d : run.visit_order) {
        const std::size_t i = in.scores.require_doc(d);
        bool wrong = false;
        for (std::size_t j = 0; j < in.scores.num_classes(); ++j) {
          wrong |= (in.scores.decision(i, j) > 0) != in.gold.contains(d, in.scores.classes()[j]);
        }
        if (!wrong) seen_correct = true;
        EXPECT_FALSE(wrong && seen_correct) << "seed " << seed;
      }
    }
  }
}

TEST(Simulate, CurvesMatchBruteForceTraces) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto in = random_instance(200 + seed, 30, 4);
    for (auto strategy : {Strategy::static_ranking, Strategy::dynamic_ranking}) {
      const auto cfg = library_config(in, Method::utheoretic, strategy, Averaging::macro, 1.1);
      const auto run = simulate(in.scores, in.gold, cfg, kXis);
      const auto ref = naive::run(in.naive, oracle_method(in, Method::utheoretic, strategy, Averaging::macro, 1.1));
      ASSERT_EQ(names(run.visit_order), ref.order);
      ASSERT_EQ(std::set<std::string>(ref.order.begin(), ref.order.end()).size(), 30u);
      const auto er_macro = naive::error_reduction(in.naive, ref.order, false, 1.0);
      const auto er_micro = naive::error_reduction(in.naive, ref.order, true, 1.0);
      for (std::size_t n = 0; n <= 30; ++n) {
        EXPECT_NEAR(run.macro.er[n], er_macro[n], 1e-9);
        EXPECT_NEAR(run.micro.er[n], er_micro[n], 1e-9);
      }
      for (std::size_t k = 0; k < kXis.size(); ++k) {
        const double p = persistence_from_xi(kXis[k], 30);
        EXPECT_NEAR(run.micro.ener[k].value, naive::ener(er_micro, p), 1e-12);
      }
    }
  }
}

TEST(SplitSimulate, PartitionAndAveraging) {
  const auto in = random_instance(31, 4, 2, 0.9);
  const auto cfg = library_config(in, Method::utheoretic, Strategy::static_ranking, Averaging::micro, 1.0);
  const std::vector<double> xis = {0.5};
  const auto a = split_simulate(in.scores, in.gold, cfg, xis, 2, 7);
  const auto b = split_simulate(in.scores, in.gold, cfg, xis, 2, 7);
  ASSERT_EQ(a.parts.size(), 2u);
  EXPECT_EQ(a.parts, b.parts);
  EXPECT_EQ(a.parts[0].size(), 2u);
  EXPECT_EQ(a.parts[1].size(), 2u);
  std::set<DocId> all(a.parts[0].begin(), a.parts[0].end());
  all.insert(a.parts[1].begin(), a.parts[1].end());
  EXPECT_EQ(all.size(), 4u);

  EXPECT_EQ(a.micro.fraction, (std::vector<double>{0, 0.5, 1}));
  {
    for (std::size_t n = 0; n < 3; ++n) {
      EXPECT_NEAR(a.micro.er[n], 0.5 * (a.runs[0].micro.er[n] + a.runs[1].micro.er[n]), 1e-15);
      EXPECT_NEAR(a.micro.ner[n], 0.5 * (a.runs[0].micro.ner[n] + a.runs[1].micro.ner[n]), 1e-15);
    }
    EXPECT_NEAR(a.micro.ener[0].value, 0.5 * (a.runs[0].micro.ener[0].value + a.runs[1].micro.ener[0].value), 1e-15);
  }
}

TEST(SplitSimulate, SinglePartEqualsSimulate) {
  const auto in = random_instance(32, 20, 3);
  const auto cfg = library_config(in, Method::utheoretic, Strategy::dynamic_ranking, Averaging::macro, 1.0);
  const auto whole = simulate(in.scores, in.gold, cfg, kXis);
  const auto split = split_simulate(in.scores, in.gold, cfg, kXis, 1, 3);
  EXPECT_EQ(split.runs[0].visit_order, whole.visit_order);
  EXPECT_EQ(split.macro.er, whole.macro.er);
}

TEST(SplitSimulate, RejectsBadPartCounts) {
  const auto in = random_instance(33, 3, 1);
  const auto cfg = library_config(in, Method::baseline, Strategy::static_ranking, Averaging::micro, 1.0);
  EXPECT_THROW(split_simulate(in.scores, in.gold, cfg, kXis, 0, 1), ConfigError);
  EXPECT_THROW(split_simulate(in.scores, in.gold, cfg, kXis, 4, 1), ConfigError);
}

TEST(Resample, LinearInterpolation) {
  EXPECT_EQ(resample_curve(std::vector<double>{0, 1, 1}, 2), (std::vector<double>{0, 1, 1}));
  EXPECT_EQ(resample_curve(std::vector<double>{0, 0.5, 0.75, 1}, 2), (std::vector<double>{0, 0.625, 1}));
}
