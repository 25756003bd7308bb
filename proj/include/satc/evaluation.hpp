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

#include "satc/model.hpp"
#include "satc/ranking.hpp"

namespace satc {

/// Residual error E(n) after the first n documents of an order have been
/// fully corrected, n = 0..|Te|. Error is 1 - F_beta; macro curves average it
/// over classes and keep the per-class curves.
struct ErrorCurve {
  Averaging averaging = Averaging::macro;
  std::vector<double> values;
  std::vector<ClassId> classes;               // macro only, matrix class order
  std::vector<std::vector<double>> per_class;  // macro only, per_class[j][n]

  std::size_t num_docs() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// `order` must be a permutation of the documents of `predictions`.
ErrorCurve residual_error_curve(std::span<const DocId> order, const ScoreMatrix& predictions,
                                const LabelSet& truth, Averaging averaging,
                                const EffectivenessSpec& spec = {});

struct ErrorReduction {
  std::vector<double> values;     // ER(0..|Te|)
  std::vector<ClassId> excluded;  // macro: classes with zero initial error
};

/// ER(n) = (E(0) - E(n)) / E(0). Macro curves average the per-class ER over
/// the classes with nonzero initial error; the others are reported as
/// excluded. Throws DegenerateInputError when no initial error is left to
/// reduce.
ErrorReduction error_reduction(const ErrorCurve& curve);

/// NER(n) = ER(n) - n / |Te|, where |Te| = er.size() - 1.
std::vector<double> normalized_error_reduction(std::span<const double> er);

/// Annotator persistence: after each document they continue with
/// probability p.
struct PersistenceModel {
  double p = 0.0;
  std::optional<double> xi;

  /// p = 1 - 1 / (xi |Te|); xi is the expected validated fraction.
  /// Throws ConfigError unless 0 < xi <= 1 and xi |Te| >= 1.
  static PersistenceModel from_xi(double xi, std::size_t num_docs);
};

double persistence_from_xi(double xi, std::size_t num_docs);

/// P_s(n) for n = 1..|Te|: p^{n-1}(1-p), and p^{|Te|-1} for the last rank.
std::vector<double> stoppage_distribution(double p, std::size_t num_docs);

/// Expected NER under the stoppage distribution. `ner_from_rank_one` holds
/// NER(1..|Te|).
double ener(std::span<const double> ner_from_rank_one, double p);

struct EnerValue {
  double xi = 0.0;
  double p = 0.0;
  double value = 0.0;
};

struct EvaluationReport {
  Averaging averaging = Averaging::macro;
  std::vector<double> error;  // E(n)
  std::vector<double> er;
  std::vector<double> ner;
  std::vector<EnerValue> ener;
  std::vector<ClassId> excluded;
};

/// Curves and ENER for every xi of one visiting order.
EvaluationReport evaluate_order(std::span<const DocId> order, const ScoreMatrix& predictions,
                                const LabelSet& truth, Averaging averaging,
                                const EffectivenessSpec& spec, std::span<const double> xis);

struct MonteCarloResult {
  Averaging averaging = Averaging::macro;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean_er;
  std::vector<double> mean_ner;
  std::vector<EnerValue> ener;  // mean over trials
};

/// Expected ER / ENER of the random ranker, estimated over `trials` seeded
/// uniform permutations. Trial t draws from its own generator derived from
/// (seed, t), so results do not depend on scheduling.
MonteCarloResult monte_carlo_random_ener(const ScoreMatrix& predictions, const LabelSet& truth,
                                         std::size_t trials, std::uint64_t seed, Averaging averaging,
                                         const EffectivenessSpec& spec, std::span<const double> xis);

}  // namespace satc
