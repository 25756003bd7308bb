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
#include "satc/evaluation.hpp"

#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "satc/error.hpp"
#include "satc/random.hpp"

namespace satc {

namespace {

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::vector<std::size_t> order_rows(std::span<const DocId> order, const ScoreMatrix& predictions) {
  if (order.size() != predictions.num_docs()) {
    throw DataError(fmt::format("order lists {} documents, the test set has {}", order.size(),
                                predictions.num_docs()));
  }
  std::vector<std::size_t> rows;
  rows.reserve(order.size());
  std::vector<std::uint8_t> seen(order.size(), 0);
  for (const auto& doc : order) {
    const std::size_t r = predictions.require_doc(doc);
    if (seen[r]) throw DataError(fmt::format("document '{}' appears twice in the order", doc.str()));
    seen[r] = 1;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

ErrorCurve residual_error_curve(std::span<const DocId> order, const ScoreMatrix& predictions,
                                const LabelSet& truth, Averaging averaging,
                                const EffectivenessSpec& spec) {
  spec.check();
  const auto rows = order_rows(order, predictions);
  const LabelSet local = truth.restricted_to(predictions.docs());
  const auto mask = local.mask_for(predictions);
  auto tables = true_tables(predictions, local);
  ContingencyTable global = merge_tables(tables);

  const std::size_t nd = predictions.num_docs();
  const std::size_t nc = predictions.num_classes();
  ErrorCurve curve;
  curve.averaging = averaging;
  curve.values.reserve(nd + 1);

  std::vector<double> class_error(nc);
  for (std::size_t c = 0; c < nc; ++c) class_error[c] = e_measure(tables[c], spec);
  if (averaging == Averaging::macro) {
    curve.classes = predictions.classes();
    curve.per_class.assign(nc, std::vector<double>());
    for (std::size_t c = 0; c < nc; ++c) {
      curve.per_class[c].reserve(nd + 1);
      curve.per_class[c].push_back(class_error[c]);
    }
  }

  auto record = [&] {
    if (averaging == Averaging::micro) {
      curve.values.push_back(e_measure(global, spec));
      return;
    }
    double sum = 0.0;
    for (double e : class_error) sum += e;
    curve.values.push_back(nc == 0 ? 0.0 : sum / static_cast<double>(nc));
  };
  record();

  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < nc; ++c) {
      const bool positive = mask[r * nc + c] != 0;
      const int decision = predictions.decision(r, c);
      const ErrorEvent event = classify_event(decision, positive);
      if (event == ErrorEvent::fp) {
        tables[c].fp -= 1.0;
        global.fp -= 1.0;
      } else if (event == ErrorEvent::fn) {
        tables[c].fn -= 1.0;
        tables[c].tp += 1.0;
        global.fn -= 1.0;
        global.tp += 1.0;
      } else {
        continue;
      }
      class_error[c] = e_measure(tables[c], spec);
    }
    if (averaging == Averaging::macro) {
      for (std::size_t c = 0; c < nc; ++c) curve.per_class[c].push_back(class_error[c]);
    }
    record();
  }
  return curve;
}

ErrorReduction error_reduction(const ErrorCurve& curve) {
  ErrorReduction out;
  const std::size_t len = curve.values.size();
  if (len == 0) throw DataError("empty error curve");

  if (curve.averaging == Averaging::micro) {
    const double e0 = curve.values.front();
    if (!(e0 > 0.0)) throw DegenerateInputError("initial error is zero; error reduction is undefined");
    out.values.reserve(len);
    for (double e : curve.values) out.values.push_back((e0 - e) / e0);
    return out;
  }

  std::vector<std::size_t> included;
  for (std::size_t c = 0; c < curve.per_class.size(); ++c) {
    if (curve.per_class[c].front() > 0.0) {
      included.push_back(c);
    } else {
      out.excluded.push_back(curve.classes[c]);
    }
  }
  if (included.empty()) {
    throw DegenerateInputError("every class has zero initial error; error reduction is undefined");
  }
  out.values.assign(len, 0.0);
  for (std::size_t n = 0; n < len; ++n) {
    double sum = 0.0;
    for (std::size_t c : included) {
      const auto& e = curve.per_class[c];
      sum += (e[0] - e[n]) / e[0];
    }
    out.values[n] = sum / static_cast<double>(included.size());
  }
  return out;
}

std::vector<double> normalized_error_reduction(std::span<const double> er) {
  if (er.empty()) return {};
  const double total = static_cast<double>(er.size() - 1);
  std::vector<double> ner(er.size());
  for (std::size_t n = 0; n < er.size(); ++n) {
    ner[n] = total > 0 ? er[n] - static_cast<double>(n) / total : er[n];
  }
  return ner;
}

PersistenceModel PersistenceModel::from_xi(double xi, std::size_t num_docs) {
  if (!(xi > 0.0 && xi <= 1.0)) throw ConfigError(fmt::format("xi must lie in (0, 1], got {}", xi));
  const double expected = xi * static_cast<double>(num_docs);
  if (expected < 1.0) {
    throw ConfigError(fmt::format("xi * |Te| = {} is below one document", expected));
  }
  return PersistenceModel{1.0 - 1.0 / expected, xi};
}

double persistence_from_xi(double xi, std::size_t num_docs) {
  return PersistenceModel::from_xi(xi, num_docs).p;
}

std::vector<double> stoppage_distribution(double p, std::size_t num_docs) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("persistence must lie in [0, 1], got {}", p));
  std::vector<double> dist(num_docs);
  double reach = 1.0;  // p^{n-1}
  for (std::size_t n = 1; n <= num_docs; ++n) {
    dist[n - 1] = n < num_docs ? reach * (1.0 - p) : reach;
    reach *= p;
  }
  return dist;
}

double ener(std::span<const double> ner_from_rank_one, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("persistence must lie in [0, 1], got {}", p));
  const std::size_t total = ner_from_rank_one.size();
  CompensatedSum sum;
  double reach = 1.0;
  for (std::size_t n = 1; n <= total; ++n) {
    const double stop = n < total ? reach * (1.0 - p) : reach;
    sum.add(stop * ner_from_rank_one[n - 1]);
    reach *= p;
  }
  return sum.value();
}

EvaluationReport evaluate_order(std::span<const DocId> order, const ScoreMatrix& predictions,
                                const LabelSet& truth, Averaging averaging,
                                const EffectivenessSpec& spec, std::span<const double> xis) {
  EvaluationReport report;
  report.averaging = averaging;
  const ErrorCurve curve = residual_error_curve(order, predictions, truth, averaging, spec);
  ErrorReduction er = error_reduction(curve);
  report.error = curve.values;
  report.ner = normalized_error_reduction(er.values);
  report.er = std::move(er.values);
  report.excluded = std::move(er.excluded);
  const std::span<const double> tail = std::span<const double>(report.ner).subspan(1);
  for (double xi : xis) {
    const auto persistence = PersistenceModel::from_xi(xi, predictions.num_docs());
    report.ener.push_back({xi, persistence.p, ener(tail, persistence.p)});
  }
  return report;
}

MonteCarloResult monte_carlo_random_ener(const ScoreMatrix& predictions, const LabelSet& truth,
                                         std::size_t trials, std::uint64_t seed, Averaging averaging,
                                         const EffectivenessSpec& spec, std::span<const double> xis) {
  if (trials < 1) throw ConfigError("Monte Carlo estimation needs at least one trial");
  const std::size_t nd = predictions.num_docs();
  MonteCarloResult out;
  out.averaging = averaging;
  out.trials = trials;
  out.seed = seed;
  out.mean_er.assign(nd + 1, 0.0);
  std::vector<double> ener_sum(xis.size(), 0.0);
  std::vector<double> p(xis.size());
  for (std::size_t k = 0; k < xis.size(); ++k) p[k] = persistence_from_xi(xis[k], nd);

  std::vector<DocId> order = predictions.docs();
  for (std::size_t t = 0; t < trials; ++t) {
    order = predictions.docs();
    Rng rng(derive_seed(seed, t));
    rng.shuffle(std::span<DocId>(order));
    const auto curve = residual_error_curve(order, predictions, truth, averaging, spec);
    const auto er = error_reduction(curve).values;
    for (std::size_t n = 0; n <= nd; ++n) out.mean_er[n] += er[n];
    const auto ner = normalized_error_reduction(er);
    for (std::size_t k = 0; k < xis.size(); ++k) {
      ener_sum[k] += ener(std::span<const double>(ner).subspan(1), p[k]);
    }
  }
  for (double& v : out.mean_er) v /= static_cast<double>(trials);
  out.mean_ner = normalized_error_reduction(out.mean_er);
  for (std::size_t k = 0; k < xis.size(); ++k) {
    out.ener.push_back({xis[k], p[k], ener_sum[k] / static_cast<double>(trials)});
  }
  return out;
}

}  // namespace satc
