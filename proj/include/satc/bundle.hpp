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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "satc/calibration.hpp"
#include "satc/estimation.hpp"
#include "satc/model.hpp"
#include "satc/ranking.hpp"

namespace satc {

/// Training-set counts supplied as-is.
struct DirectCounts {
  std::map<ClassId, ContingencyTable> counts;
  std::size_t train_size = 1;
};

/// Everything one experiment or annotation session needs.
///
/// Invariants: exactly one of `counts` and `cv` is set; gold labels only
/// reference test documents and classes; both table sources cover exactly
/// the test classes.
struct DatasetBundle {
  std::string name;
  ScoreMatrix test_scores;
  std::optional<LabelSet> gold;
  std::optional<DirectCounts> counts;
  std::optional<CvScores> cv;
  /// Fixed growth rate; when absent it is fitted on `cv`.
  std::optional<double> sigma;

  void check() const;

  /// Training estimates scaled to the test set.
  TrainingEstimates estimates() const;
};

/// Directory layout (see docs/formats.md):
///   bundle.json        optional metadata
///   test_scores.tsv    required
///   test_labels.tsv    optional gold
///   estimates.tsv      or cv_scores.tsv + train_labels.tsv
DatasetBundle load_bundle(const std::filesystem::path& dir);
void save_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

/// Ranking config for `spec` on `bundle`, with the growth rate taken from
/// `sigma`, else from the bundle, else fitted on the CV scores under
/// spec.averaging. `sigma_used` is empty only for methods that ignore it.
struct ResolvedConfig {
  RankingConfig config;
  std::optional<double> sigma_used;
};
ResolvedConfig resolve_config(const DatasetBundle& bundle, const MethodSpec& spec,
                              std::optional<double> sigma = std::nullopt,
                              const CalibrationGrid& grid = CalibrationGrid::standard());

/// Parameters of a synthetic dataset. Scores are drawn so that a decision
/// with confidence c is wrong with probability 1 / (1 + e^{true_sigma c}).
struct SyntheticSpec {
  std::size_t test_docs = 200;
  std::size_t train_docs = 400;
  std::size_t classes = 4;
  /// Rates of positive decisions, spread uniformly over [min, max].
  double min_prevalence = 0.05;
  double max_prevalence = 0.4;
  /// Confidences are exponential with this mean.
  double mean_confidence = 1.0;
  double true_sigma = 1.5;
  std::uint64_t seed = 1;
};

/// Seeded synthetic bundle with gold labels and CV scores.
DatasetBundle make_synthetic_bundle(const SyntheticSpec& spec);

}  // namespace satc
