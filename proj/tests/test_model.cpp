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
#include <limits>

#include <gtest/gtest.h>

#include "satc/error.hpp"
#include "satc/model.hpp"
#include "support.hpp"

using namespace satc;

namespace {

ContingencyTable T(double tp, double fp, double fn) { return {tp, fp, fn, std::nullopt}; }

}  // namespace

TEST(Identifier, RejectsEmptyAndControlCharacters) {
  EXPECT_THROW(DocId(""), DataError);
  EXPECT_THROW(DocId("a\tb"), DataError);
  EXPECT_THROW(ClassId("a\nb"), DataError);
  EXPECT_THROW(ClassId("a\rb"), DataError);
  EXPECT_NO_THROW(DocId("doc 1/ü"));
}

TEST(Identifier, OrdersLexicographically) {
  EXPECT_LT(DocId("a10"), DocId("a9"));
  EXPECT_EQ(DocId("x"), DocId("x"));
}

TEST(ScoreMatrix, ValidatesShapeAndValues) {
  EXPECT_THROW(ScoreMatrix({DocId("d")}, {ClassId("c")}, {}), DataError);
  EXPECT_THROW(ScoreMatrix({DocId("d")}, {ClassId("c")}, {std::nan("")}), DataError);
  EXPECT_THROW(ScoreMatrix({DocId("d")}, {ClassId("c")}, {std::numeric_limits<double>::infinity()}), DataError);
  EXPECT_THROW(ScoreMatrix({DocId("d"), DocId("d")}, {ClassId("c")}, {1, 2}), DataError);
  EXPECT_THROW(ScoreMatrix({DocId("d")}, {ClassId("c"), ClassId("c")}, {1, 2}), DataError);
}

TEST(ScoreMatrix, FromEntriesKeepsFirstAppearanceOrder) {
  const std::vector<ScoreMatrix::Entry> e = {{DocId("d2"), ClassId("b"), 1.0},
                                             {DocId("d1"), ClassId("b"), -2.0},
                                             {DocId("d2"), ClassId("a"), 0.0},
                                             {DocId("d1"), ClassId("a"), 3.5}};
  const auto m = ScoreMatrix::from_entries(e);
  ASSERT_EQ(m.num_docs(), 2u);
  ASSERT_EQ(m.num_classes(), 2u);
  EXPECT_EQ(m.docs()[0], DocId("d2"));
  EXPECT_EQ(m.classes()[0], ClassId("b"));
  EXPECT_EQ(m.score(DocId("d1"), ClassId("a")), 3.5);
  EXPECT_EQ(m.decision(0, 1), -1);  // score 0 is a negative decision
  EXPECT_EQ(m.decision(1, 1), 1);
  EXPECT_EQ(m.confidence(1, 0), 2.0);
}

TEST(ScoreMatrix, FromEntriesRejectsDuplicatesAndGaps) {
  const std::vector<ScoreMatrix::Entry> dup = {{DocId("d"), ClassId("c"), 1.0}, {DocId("d"), ClassId("c"), 2.0}};
  EXPECT_THROW(ScoreMatrix::from_entries(dup), DataError);
  const std::vector<ScoreMatrix::Entry> gap = {{DocId("d1"), ClassId("a"), 1.0}, {DocId("d2"), ClassId("b"), 2.0}};
  EXPECT_THROW(ScoreMatrix::from_entries(gap), DataError);
}

TEST(ScoreMatrix, LookupErrors) {
  const ScoreMatrix m({DocId("d")}, {ClassId("c")}, {1.0});
  EXPECT_THROW(m.require_doc(DocId("x")), LookupError);
  EXPECT_THROW(m.require_class(ClassId("x")), LookupError);
  EXPECT_FALSE(m.doc_index(DocId("x")).has_value());
}

TEST(ScoreMatrix, SelectDocs) {
  const ScoreMatrix m({DocId("a"), DocId("b"), DocId("c")}, {ClassId("x"), ClassId("y")}, {1, 2, 3, 4, 5, 6});
  const std::vector<std::size_t> rows = {2, 0};
  const auto s = m.select_docs(rows);
  ASSERT_EQ(s.num_docs(), 2u);
  EXPECT_EQ(s.docs()[0], DocId("c"));
  EXPECT_EQ(s.score(0, 1), 6.0);
  EXPECT_EQ(s.score(1, 0), 1.0);
}

TEST(LabelSet, BasicsAndMask) {
  LabelSet l;
  l.add(DocId("b"), ClassId("y"));
  l.add(DocId("a"), ClassId("x"));
  l.add(DocId("a"), ClassId("x"));
  EXPECT_EQ(l.size(), 2u);
  EXPECT_TRUE(l.contains(DocId("a"), ClassId("x")));
  EXPECT_FALSE(l.contains(DocId("a"), ClassId("y")));
  const auto pairs = l.sorted_pairs();
  EXPECT_EQ(pairs[0].first, DocId("a"));

  const ScoreMatrix m({DocId("a"), DocId("b")}, {ClassId("x"), ClassId("y")}, {1, 1, 1, 1});
  EXPECT_EQ(l.mask_for(m), (std::vector<std::uint8_t>{1, 0, 0, 1}));
  LabelSet outside = l;
  outside.add(DocId("z"), ClassId("x"));
  EXPECT_THROW((void)outside.mask_for(m), DataError);
  const std::vector<DocId> keep = {DocId("b")};
  EXPECT_EQ(outside.restricted_to(keep).size(), 1u);
}

TEST(FMeasure, DefinitionAndEdgeCases) {
  EXPECT_EQ(f_beta(T(0, 0, 0)), 1.0);
  EXPECT_EQ(f_beta(T(0, 3, 0)), 0.0);
  EXPECT_DOUBLE_EQ(f_beta(T(10, 30, 20)), 20.0 / 70.0);
  EXPECT_DOUBLE_EQ(e_measure(T(10, 30, 20)), 50.0 / 70.0);
  // beta = 2 weighs recall: (5 * 10) / (5 * 10 + 30 + 4 * 20)
  EXPECT_DOUBLE_EQ(f_beta(T(10, 30, 20), {2.0}), 50.0 / 160.0);
  EXPECT_THROW(EffectivenessSpec{0.0}.check(), ConfigError);
  EXPECT_THROW(EffectivenessSpec{std::nan("")}.check(), ConfigError);
}

TEST(FMeasure, MatchesNaiveOnRandomTables) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double tp = static_cast<double>(rng.below(50));
    const double fp = static_cast<double>(rng.below(50));
    const double fn = static_cast<double>(rng.below(50));
    const double beta = 0.25 + rng.uniform() * 3;
    EXPECT_NEAR(f_beta(T(tp, fp, fn), {beta}), naive::f_beta({tp, fp, fn}, beta), 1e-15);
  }
}

TEST(ContingencyTable, MergeAndArithmetic) {
  const std::vector<ContingencyTable> tables = {T(1, 2, 3), T(9, 28, 17)};
  const auto merged = merge_tables(tables);
  EXPECT_EQ(merged.tp, 10);
  EXPECT_EQ(merged.fp, 30);
  EXPECT_EQ(merged.fn, 20);
  ContingencyTable a{1, 1, 1, 5.0};
  const ContingencyTable b{1, 1, 1, 2.0};
  EXPECT_EQ((a + b).tn, 7.0);
  EXPECT_FALSE((a + T(0, 0, 0)).tn.has_value());
  EXPECT_THROW(T(1, std::nan(""), 0).check(), DataError);
}

TEST(ContingencyTable, TrueTablesMatchHandTally) {
  // d1: +,+  d2: -,+  d3: +,-   gold: (d1,x) (d2,x) (d3,y)
  const ScoreMatrix m({DocId("d1"), DocId("d2"), DocId("d3")}, {ClassId("x"), ClassId("y")},
                      {1, 1, -1, 1, 1, -1});
  LabelSet gold;
  gold.add(DocId("d1"), ClassId("x"));
  gold.add(DocId("d2"), ClassId("x"));
  gold.add(DocId("d3"), ClassId("y"));
  const auto t = true_tables(m, gold);
  EXPECT_EQ(t[0], (ContingencyTable{1, 1, 1, 0.0}));  // x: d1 tp, d2 fn, d3 fp
  EXPECT_EQ(t[1], (ContingencyTable{0, 2, 1, 0.0}));  // y: d1 fp, d2 fp, d3 fn
}

TEST(ErrorEvent, Classification) {
  EXPECT_EQ(classify_event(1, true), ErrorEvent::tp);
  EXPECT_EQ(classify_event(1, false), ErrorEvent::fp);
  EXPECT_EQ(classify_event(-1, true), ErrorEvent::fn);
  EXPECT_EQ(classify_event(-1, false), ErrorEvent::tn);
}
