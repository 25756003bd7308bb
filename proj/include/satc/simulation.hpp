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
#include <span>
#include <vector>

#include "satc/evaluation.hpp"
#include "satc/ranking.hpp"

namespace satc {

/// One replay of the gold labels by an infallible annotator.
struct SimulationRun {
  std::size_t num_docs = 0;
  std::vector<double> xis;
  /// Documents in the order they were validated.
  std::vector<DocId> visit_order;
  EvaluationReport macro;
  EvaluationReport micro;
  /// Wall-clock seconds spent producing the order (ranking, or the whole
  /// dynamic selection loop) and evaluating it.
  double rank_seconds = 0.0;
  double sweep_seconds = 0.0;
};

/// Static configs are ranked once and swept; dynamic configs loop
/// next / compare with gold / correct until every document is validated.
/// Reports are computed for both averaging modes.
SimulationRun simulate(const ScoreMatrix& scores, const LabelSet& gold, const RankingConfig& config,
                       std::span<const double> xis);

/// Curves averaged over the parts of a split test set, on a common grid of
/// validated fractions i / m, m = smallest part size.
struct AveragedReport {
  Averaging averaging = Averaging::macro;
  std::vector<double> fraction;
  std::vector<double> er;
  std::vector<double> ner;
  std::vector<EnerValue> ener;  // means of the per-part p and ENER
};

struct SplitRun {
  std::uint64_t seed = 0;
  std::vector<std::vector<DocId>> parts;
  std::vector<SimulationRun> runs;
  AveragedReport macro;
  AveragedReport micro;
};

/// Seeded random partition of the test set into k near-equal parts (sizes
/// differ by at most one), simulated independently. Estimated tables are
/// rescaled to each part's size. Throws ConfigError unless 1 <= k <= |Te|.
SplitRun split_simulate(const ScoreMatrix& scores, const LabelSet& gold, const RankingConfig& config,
                        std::span<const double> xis, std::size_t k, std::uint64_t seed);

/// Linear interpolation of a curve over 0..s onto the grid i / m, i = 0..m.
std::vector<double> resample_curve(std::span<const double> curve, std::size_t m);

}  // namespace satc
