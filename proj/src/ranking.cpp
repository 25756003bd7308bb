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
#include "satc/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "satc/error.hpp"
#include "satc/simd/kernels.hpp"

namespace satc {

std::string_view strategy_name(Strategy s) noexcept {
  return s == Strategy::static_ranking ? "static" : "dynamic";
}

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::baseline: return "baseline";
    case Method::utheoretic: return "utheoretic";
    case Method::oracle1: return "oracle1";
    case Method::oracle2: return "oracle2";
  }
  return "unknown";
}

std::string_view averaging_name(Averaging a) noexcept { return a == Averaging::macro ? "macro" : "micro"; }

std::optional<Strategy> parse_strategy(std::string_view s) noexcept {
  if (s == "static") return Strategy::static_ranking;
  if (s == "dynamic") return Strategy::dynamic_ranking;
  return std::nullopt;
}

std::optional<Method> parse_method(std::string_view s) noexcept {
  for (auto m : {Method::baseline, Method::utheoretic, Method::oracle1, Method::oracle2}) {
    if (method_name(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<Averaging> parse_averaging(std::string_view s) noexcept {
  if (s == "macro") return Averaging::macro;
  if (s == "micro") return Averaging::micro;
  return std::nullopt;
}

void RankingConfig::check() const {
  effectiveness.check();
  if (const auto* model = std::get_if<CalibrationModel>(&probs)) model->check();
  if (const auto* est = std::get_if<TrainingEstimates>(&tables)) est->check();
}

GainRule default_gain_rule(const MethodSpec& spec) noexcept {
  if (spec.method == Method::baseline) return GainRule::unit;
  const bool micro = spec.averaging == Averaging::micro;
  if (spec.strategy == Strategy::static_ranking) {
    return micro ? GainRule::micro_average : GainRule::average;
  }
  return micro ? GainRule::micro_pointwise : GainRule::pointwise;
}

RankingConfig make_config(const MethodSpec& spec, const std::optional<CalibrationModel>& calibration,
                          const TrainingEstimates* estimates, const LabelSet* gold) {
  RankingConfig config;
  config.gain_rule = default_gain_rule(spec);
  config.strategy = spec.strategy;
  config.effectiveness = spec.effectiveness;

  const bool oracle_probs = spec.method == Method::oracle2;
  const bool oracle_tables = spec.method == Method::oracle1 || spec.method == Method::oracle2;
  if ((oracle_probs || oracle_tables) && gold == nullptr) {
    throw ConfigError(fmt::format("method {} needs gold test labels", method_name(spec.method)));
  }
  if (oracle_probs) {
    config.probs = OracleTruth{*gold};
  } else if (calibration) {
    config.probs = *calibration;
  } else {
    throw ConfigError(fmt::format("method {} needs a calibrated sigma", method_name(spec.method)));
  }

  if (oracle_tables) {
    config.tables = OracleCounts{*gold};
  } else if (estimates != nullptr) {
    config.tables = *estimates;
  } else if (spec.method == Method::baseline) {
    // Unit gains never read the tables; all-zero estimates keep the live
    // effectiveness figures defined.
    config.tables = TrainingEstimates{};
  } else {
    throw ConfigError(fmt::format("method {} needs training estimates", method_name(spec.method)));
  }
  config.check();
  return config;
}

namespace {

double error_probability_of(const ProbabilitySource& probs, const DocId& doc, const ClassId& cls,
                            double score) {
  if (const auto* model = std::get_if<CalibrationModel>(&probs)) {
    return misclassification_probability(score, *model);
  }
  const bool truth = std::get<OracleTruth>(probs).labels.contains(doc, cls);
  return (score > 0.0) != truth ? 1.0 : 0.0;
}

template <class Id>
std::vector<std::size_t> sorted_positions(const std::vector<Id>& ids) {
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  return order;
}

}  // namespace

double document_utility(const DocId& doc, const ScoreMatrix& scores, const ClassGains& gains,
                        const ProbabilitySource& probs) {
  if (gains.size() != scores.num_classes()) {
    throw DataError(fmt::format("{} gain pairs for {} classes", gains.size(), scores.num_classes()));
  }
  const std::size_t row = scores.require_doc(doc);
  double utility = 0.0;
  for (std::size_t c : sorted_positions(scores.classes())) {
    const double s = scores.score(row, c);
    const double p = error_probability_of(probs, doc, scores.classes()[c], s);
    utility += p * (s > 0.0 ? gains[c].fp : gains[c].fn);
  }
  return utility;
}

// ---------------------------------------------------------------------------
// UtilityModel

UtilityModel::UtilityModel(const ScoreMatrix& scores, const RankingConfig& config) : config_(config) {
  config_.check();
  const auto doc_rows = sorted_positions(scores.docs());
  const auto class_cols = sorted_positions(scores.classes());
  const std::size_t nd = doc_rows.size();
  const std::size_t nc = class_cols.size();

  docs_.reserve(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    docs_.push_back(scores.docs()[doc_rows[i]]);
    doc_pos_.emplace(docs_.back().str(), i);
  }
  classes_.reserve(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    classes_.push_back(scores.classes()[class_cols[j]]);
    class_pos_.emplace(classes_.back().str(), j);
  }

  // Oracle label sets may cover more documents than this matrix (e.g. one
  // part of a split test set).
  std::optional<LabelSet> local_truth;
  if (const auto* truth = std::get_if<OracleTruth>(&config_.probs)) {
    local_truth = truth->labels.restricted_to(scores.docs());
  }
  const ProbabilitySource probs =
      local_truth ? ProbabilitySource{OracleTruth{*local_truth}} : config_.probs;

  signed_probs_.resize(nd * nc);
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t i = 0; i < nd; ++i) {
      const double s = scores.score(doc_rows[i], class_cols[j]);
      const double p = error_probability_of(probs, docs_[i], classes_[j], s);
      signed_probs_[j * nd + i] = s > 0.0 ? p : -p;
    }
  }

  std::vector<ContingencyTable> raw(nc);
  if (const auto* est = std::get_if<TrainingEstimates>(&config_.tables)) {
    for (std::size_t j = 0; j < nc; ++j) {
      if (est->counts.empty() && config_.gain_rule == GainRule::unit) {
        raw[j] = ContingencyTable{0, 0, 0, std::nullopt};
      } else {
        raw[j] = ml_estimate(*est, classes_[j]);
      }
    }
  } else {
    const auto& labels = std::get<OracleCounts>(config_.tables).labels;
    const auto tables = true_tables(scores, labels.restricted_to(scores.docs()));
    for (std::size_t j = 0; j < nc; ++j) raw[j] = tables[class_cols[j]];
  }
  global_table_ = smooth_on_demand(merge_tables(raw));
  class_tables_.reserve(nc);
  for (const auto& t : raw) class_tables_.push_back(smooth_on_demand(t));

  gain_fp_.assign(nc, 1.0);
  gain_fn_.assign(nc, 1.0);
  refresh_gains(std::nullopt);
}

std::optional<std::size_t> UtilityModel::doc_position(const DocId& doc) const {
  auto it = doc_pos_.find(doc.str());
  if (it == doc_pos_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> UtilityModel::class_position(const ClassId& cls) const {
  auto it = class_pos_.find(cls.str());
  if (it == class_pos_.end()) return std::nullopt;
  return it->second;
}

int UtilityModel::decision(std::size_t doc, std::size_t cls) const {
  return std::signbit(signed_probs_[cls * docs_.size() + doc]) ? -1 : 1;
}

double UtilityModel::error_probability(std::size_t doc, std::size_t cls) const {
  return std::fabs(signed_probs_[cls * docs_.size() + doc]);
}

void UtilityModel::refresh_gains(std::optional<std::size_t> only_class) {
  const GainRule rule = config_.gain_rule;
  if (rule == GainRule::unit) return;
  if (is_micro(rule)) {
    const Gains g = gains_for(rule, global_table_.table, config_.effectiveness);
    std::fill(gain_fp_.begin(), gain_fp_.end(), g.fp);
    std::fill(gain_fn_.begin(), gain_fn_.end(), g.fn);
    return;
  }
  auto update = [&](std::size_t j) {
    const Gains g = gains_for(rule, class_tables_[j].table, config_.effectiveness);
    gain_fp_[j] = g.fp;
    gain_fn_[j] = g.fn;
  };
  if (only_class) {
    update(*only_class);
  } else {
    for (std::size_t j = 0; j < classes_.size(); ++j) update(j);
  }
}

void UtilityModel::compute_utilities(std::span<double> out) const {
  if (out.size() != docs_.size()) throw DataError("utility buffer size mismatch");
  simd::kernels().accumulate_utilities(signed_probs_, gain_fp_, gain_fn_, out);
}

namespace {

EstimatedTable corrected(const EstimatedTable& current, int decision) {
  ContingencyTable t = current.table;
  if (decision > 0) {
    t.fp -= 1.0;
    if (t.tn) *t.tn += 1.0;
  } else {
    t.tp += 1.0;
    t.fn -= 1.0;
  }
  EstimatedTable next = smooth_on_demand(t);
  next.smoothed = next.smoothed || current.smoothed;
  return next;
}

}  // namespace

void UtilityModel::apply_flip(std::size_t doc, std::size_t cls) {
  if (doc >= docs_.size() || cls >= classes_.size()) throw LookupError("flip outside the problem");
  const int d = decision(doc, cls);
  class_tables_[cls] = corrected(class_tables_[cls], d);
  global_table_ = corrected(global_table_, d);
  if (config_.updates_gains()) refresh_gains(is_micro(config_.gain_rule) ? std::nullopt : std::optional{cls});
}

double UtilityModel::estimated_f_macro() const {
  if (class_tables_.empty()) return 1.0;
  double sum = 0.0;
  for (const auto& t : class_tables_) sum += f_beta(t.table, config_.effectiveness);
  return sum / static_cast<double>(class_tables_.size());
}

double UtilityModel::estimated_f_micro() const {
  return f_beta(global_table_.table, config_.effectiveness);
}

// ---------------------------------------------------------------------------

std::vector<RankedDoc> rank_static(const ScoreMatrix& scores, const RankingConfig& config) {
  if (config.strategy != Strategy::static_ranking) {
    throw ConfigError("rank_static needs a static config; dynamic orders come from a validation session");
  }
  const UtilityModel model(scores, config);
  std::vector<double> utility(model.num_docs());
  model.compute_utilities(utility);

  std::vector<std::size_t> order(model.num_docs());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Canonical positions are in DocId order, so stability gives the tie-break.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return utility[a] > utility[b]; });

  std::vector<RankedDoc> ranking;
  ranking.reserve(order.size());
  for (std::size_t i : order) ranking.push_back({model.docs()[i], utility[i]});
  return ranking;
}

std::vector<std::vector<RankedDoc>> round_robin_split(std::span<const RankedDoc> ranking, std::size_t k) {
  if (k < 1) throw ConfigError("round-robin split needs k >= 1");
  std::vector<std::vector<RankedDoc>> parts(k);
  for (std::size_t r = 0; r < ranking.size(); ++r) parts[r % k].push_back(ranking[r]);
  return parts;
}

}  // namespace satc
