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

// Shared fixtures: seeded random instances available both as library types
// and as oracle instances.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/core.h>

#include "oracle/naive.hpp"
#include "satc/estimation.hpp"
#include "satc/model.hpp"
#include "satc/random.hpp"
#include "satc/ranking.hpp"

namespace testing_support {

struct RandomInstance {
  satc::ScoreMatrix scores;
  satc::LabelSet gold;
  satc::TrainingEstimates estimates;
  naive::Instance naive;
  std::map<std::string, naive::Table> train_counts;
  std::size_t train_size = 0;
};

/// Scores uniform in (-3, 3) rounded to 1/64 so ties occur; each label is
/// wrong with probability `error_rate`. Documents are created in shuffled
/// order so canonical sorting is exercised.
inline RandomInstance random_instance(std::uint64_t seed, std::size_t docs, std::size_t classes,
                                      double error_rate = 0.25) {
  satc::Rng rng(seed);
  RandomInstance out;
  std::vector<std::size_t> perm(docs);
  for (std::size_t i = 0; i < docs; ++i) perm[i] = i;
  rng.shuffle(std::span<std::size_t>(perm));
  std::vector<satc::DocId> doc_ids;
  std::vector<satc::ClassId> class_ids;
  for (std::size_t i = 0; i < docs; ++i) doc_ids.emplace_back(fmt::format("d{:03}", perm[i]));
  for (std::size_t j = 0; j < classes; ++j) class_ids.emplace_back(fmt::format("k{}", classes - j));
  std::vector<double> values(docs * classes);
  for (std::size_t i = 0; i < docs; ++i) {
    for (std::size_t j = 0; j < classes; ++j) {
      const double s = std::round((rng.uniform() * 6.0 - 3.0) * 64.0) / 64.0;
      values[i * classes + j] = s;
      const bool pred = s > 0;
      const bool wrong = rng.uniform() < error_rate;
      const bool truth = pred != wrong;
      const std::string d = doc_ids[i].str();
      const std::string c = class_ids[j].str();
      out.naive.score[{d, c}] = s;
      if (truth) {
        out.gold.add(doc_ids[i], class_ids[j]);
        out.naive.gold.insert({d, c});
      }
    }
  }
  for (const auto& d : doc_ids) out.naive.docs.push_back(d.str());
  for (const auto& c : class_ids) out.naive.classes.push_back(c.str());

  out.train_size = 3 * docs + 7;
  out.estimates.train_size = out.train_size;
  out.estimates.test_size = docs;
  for (const auto& c : class_ids) {
    const double tp = static_cast<double>(rng.below(2 * docs));
    const double fp = static_cast<double>(rng.below(docs));
    const double fn = static_cast<double>(rng.below(docs));
    out.estimates.counts[c] = satc::ContingencyTable{tp, fp, fn, std::nullopt};
    out.train_counts[c.str()] = {tp, fp, fn};
  }
  out.scores = satc::ScoreMatrix(std::move(doc_ids), std::move(class_ids), std::move(values));
  return out;
}

/// Library config and the matching oracle method for one cell of the
/// evaluation matrix.
inline satc::RankingConfig library_config(const RandomInstance& in, satc::Method method, satc::Strategy strategy,
                                          satc::Averaging averaging, double sigma) {
  const satc::MethodSpec spec{method, strategy, averaging, {}};
  return satc::make_config(spec, satc::CalibrationModel{sigma}, &in.estimates, &in.gold);
}

inline naive::Method oracle_method(const RandomInstance& in, satc::Method method, satc::Strategy strategy,
                                   satc::Averaging averaging, double sigma) {
  naive::Method m;
  const bool micro = averaging == satc::Averaging::micro;
  const bool dynamic = strategy == satc::Strategy::dynamic_ranking;
  if (method == satc::Method::baseline) {
    m.rule = naive::Rule::unit;
  } else if (dynamic) {
    m.rule = micro ? naive::Rule::micro_pointwise : naive::Rule::pointwise;
  } else {
    m.rule = micro ? naive::Rule::micro_average : naive::Rule::average;
  }
  m.dynamic = dynamic;
  m.oracle_probs = method == satc::Method::oracle2;
  m.oracle_tables = method == satc::Method::oracle1 || method == satc::Method::oracle2;
  m.sigma = sigma;
  m.train_counts = in.train_counts;
  m.train_size = static_cast<double>(in.train_size);
  return m;
}

inline std::vector<std::string> names(const std::vector<satc::DocId>& ids) {
  std::vector<std::string> out;
  for (const auto& d : ids) out.push_back(d.str());
  return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / fmt::format("satc-test-{}-{}", name, ::getpid());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
