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
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "satc/calibration.hpp"
#include "satc/estimation.hpp"
#include "satc/gains.hpp"
#include "satc/model.hpp"

namespace satc {

enum class Strategy : std::uint8_t { static_ranking, dynamic_ranking };
enum class Method : std::uint8_t { baseline, utheoretic, oracle1, oracle2 };
enum class Averaging : std::uint8_t { macro, micro };

std::string_view strategy_name(Strategy s) noexcept;
std::string_view method_name(Method m) noexcept;
std::string_view averaging_name(Averaging a) noexcept;
std::optional<Strategy> parse_strategy(std::string_view s) noexcept;
std::optional<Method> parse_method(std::string_view s) noexcept;
std::optional<Averaging> parse_averaging(std::string_view s) noexcept;

/// Error probabilities replaced by the true 0/1 error indicators.
struct OracleTruth {
  LabelSet labels;
};
/// Contingency tables taken from the true test labels.
struct OracleCounts {
  LabelSet labels;
};

using ProbabilitySource = std::variant<CalibrationModel, OracleTruth>;
using TableSource = std::variant<TrainingEstimates, OracleCounts>;

struct RankingConfig {
  GainRule gain_rule = GainRule::average;
  ProbabilitySource probs = CalibrationModel{};
  TableSource tables = TrainingEstimates{};
  Strategy strategy = Strategy::static_ranking;
  EffectivenessSpec effectiveness;

  /// Gains are refreshed after corrections only for dynamic, non-unit configs.
  bool updates_gains() const noexcept {
    return strategy == Strategy::dynamic_ranking && gain_rule != GainRule::unit;
  }
  void check() const;
};

/// Named method of the evaluation matrix (baseline, U-Theoretic, Oracle1,
/// Oracle2) crossed with strategy and averaging.
struct MethodSpec {
  Method method = Method::utheoretic;
  Strategy strategy = Strategy::static_ranking;
  Averaging averaging = Averaging::macro;
  EffectivenessSpec effectiveness;
};

/// Gain rule paired with a method: unit for the baseline; average gains for
/// static and pointwise gains for dynamic rankings; micro variants under
/// micro averaging.
GainRule default_gain_rule(const MethodSpec& spec) noexcept;

/// Builds the config of `spec`. Calibration and estimates are needed by the
/// non-oracle parts; gold labels by the oracles. Throws ConfigError when a
/// required input is missing.
RankingConfig make_config(const MethodSpec& spec, const std::optional<CalibrationModel>& calibration,
                          const TrainingEstimates* estimates, const LabelSet* gold);

/// Per-class gains aligned with ScoreMatrix::classes().
using ClassGains = std::vector<Gains>;

/// Total expected utility of validating `doc`: the sum over classes of
/// P(error) * G(error), where the error is a false positive for positive
/// decisions and a false negative otherwise. Classes are summed in ascending
/// ClassId order.
double document_utility(const DocId& doc, const ScoreMatrix& scores, const ClassGains& gains,
                        const ProbabilitySource& probs);

/// Dense, canonically ordered view of a ranking problem: documents sorted by
/// DocId, classes by ClassId. Holds the signed error probabilities, current
/// table estimates and the gains derived from them.
class UtilityModel {
 public:
  UtilityModel(const ScoreMatrix& scores, const RankingConfig& config);

  std::size_t num_docs() const noexcept { return docs_.size(); }
  std::size_t num_classes() const noexcept { return classes_.size(); }
  const std::vector<DocId>& docs() const noexcept { return docs_; }
  const std::vector<ClassId>& classes() const noexcept { return classes_; }
  std::optional<std::size_t> doc_position(const DocId& doc) const;
  std::optional<std::size_t> class_position(const ClassId& cls) const;

  /// +1 / -1 decision and error probability of a cell (canonical indices).
  int decision(std::size_t doc, std::size_t cls) const;
  double error_probability(std::size_t doc, std::size_t cls) const;

  const std::vector<EstimatedTable>& class_tables() const noexcept { return class_tables_; }
  const EstimatedTable& global_table() const noexcept { return global_table_; }
  const std::vector<double>& gain_fp() const noexcept { return gain_fp_; }
  const std::vector<double>& gain_fn() const noexcept { return gain_fn_; }
  const RankingConfig& config() const noexcept { return config_; }

  /// Writes every document's utility (canonical order) with the active SIMD
  /// kernel.
  void compute_utilities(std::span<double> out) const;

  /// Records the correction of cell (doc, cls): a false positive leaves the
  /// table, or a false negative becomes a true positive. Tables are
  /// re-smoothed on demand; gains are refreshed if the config updates gains.
  void apply_flip(std::size_t doc, std::size_t cls);

  /// Estimated F over the current tables.
  double estimated_f_macro() const;
  double estimated_f_micro() const;

 private:
  void refresh_gains(std::optional<std::size_t> only_class);

  RankingConfig config_;
  std::vector<DocId> docs_;
  std::vector<ClassId> classes_;
  std::unordered_map<std::string, std::size_t> doc_pos_;
  std::unordered_map<std::string, std::size_t> class_pos_;
  std::vector<double> signed_probs_;  // class-major
  std::vector<EstimatedTable> class_tables_;
  EstimatedTable global_table_;
  std::vector<double> gain_fp_;
  std::vector<double> gain_fn_;
};

struct RankedDoc {
  DocId doc;
  double utility = 0.0;
  friend bool operator==(const RankedDoc&, const RankedDoc&) = default;
};

/// Documents by descending utility, ties by ascending DocId.
/// Requires a static config (ConfigError otherwise).
std::vector<RankedDoc> rank_static(const ScoreMatrix& scores, const RankingConfig& config);

/// Deals a ranking to k annotators: annotator i gets global positions r with
/// r mod k == i, in order.
std::vector<std::vector<RankedDoc>> round_robin_split(std::span<const RankedDoc> ranking, std::size_t k);

}  // namespace satc
