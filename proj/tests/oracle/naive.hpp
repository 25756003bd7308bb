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

// Deliberately naive reference implementations used as test oracles. They
// share no code with the library: plain maps keyed by strings, every measure
// recomputed from scratch, no kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace naive {

struct Table {
  double tp = 0, fp = 0, fn = 0;
};

inline double f_beta(const Table& t, double beta) {
  if (t.tp == 0 && t.fp == 0 && t.fn == 0) return 1.0;
  const double b2 = beta * beta;
  return (1 + b2) * t.tp / ((1 + b2) * t.tp + t.fp + b2 * t.fn);
}

inline Table smooth(Table t) {
  if (t.tp < 1 || t.fp < 1 || t.fn < 1) {
    t.tp += 1;
    t.fp += 1;
    t.fn += 1;
  }
  return t;
}

struct Gains {
  double fp = 1, fn = 1;
};

inline Gains average_gains(const Table& t, double beta) {
  const double f = f_beta(t, beta);
  return {(f_beta({t.tp, 0, t.fn}, beta) - f) / t.fp, (f_beta({t.tp + t.fn, t.fp, 0}, beta) - f) / t.fn};
}

inline Gains pointwise_gains(const Table& t, double beta) {
  const double f = f_beta(t, beta);
  return {f_beta({t.tp, t.fp - 1, t.fn}, beta) - f, f_beta({t.tp + 1, t.fp, t.fn - 1}, beta) - f};
}

inline double error_probability(double score, double sigma) { return 1.0 / (1.0 + std::exp(sigma * std::fabs(score))); }

/// A small multi-label problem keyed by plain strings.
struct Instance {
  std::vector<std::string> docs;     // any order
  std::vector<std::string> classes;  // any order
  std::map<std::pair<std::string, std::string>, double> score;
  std::set<std::pair<std::string, std::string>> gold;

  bool predicted(const std::string& d, const std::string& c) const { return score.at({d, c}) > 0; }
  bool truth(const std::string& d, const std::string& c) const { return gold.count({d, c}) > 0; }
};

enum class Rule { unit, average, pointwise, micro_average, micro_pointwise };

struct Method {
  Rule rule = Rule::average;
  bool dynamic = false;
  bool oracle_probs = false;   // 0/1 error indicators instead of calibrated ones
  bool oracle_tables = false;  // true test tables instead of scaled training counts
  double sigma = 1.0;
  double beta = 1.0;
  std::map<std::string, Table> train_counts;
  double train_size = 1;
};

/// Table of class c with predictions corrected on the documents in `fixed`.
inline Table table_after(const Instance& in, const std::string& c, const std::set<std::string>& fixed) {
  Table t;
  for (const auto& d : in.docs) {
    const bool truth = in.truth(d, c);
    const bool pred = fixed.count(d) ? truth : in.predicted(d, c);
    if (pred && truth) t.tp += 1;
    if (pred && !truth) t.fp += 1;
    if (!pred && truth) t.fn += 1;
  }
  return t;
}

/// Residual error after correcting each prefix of `order`, recomputed from
/// scratch at every step.
inline std::vector<double> error_curve(const Instance& in, const std::vector<std::string>& order, bool micro,
                                       double beta) {
  std::vector<double> curve;
  std::set<std::string> fixed;
  for (std::size_t n = 0; n <= order.size(); ++n) {
    if (n > 0) fixed.insert(order[n - 1]);
    if (micro) {
      Table g;
      for (const auto& c : in.classes) {
        const Table t = table_after(in, c, fixed);
        g.tp += t.tp;
        g.fp += t.fp;
        g.fn += t.fn;
      }
      curve.push_back(1.0 - f_beta(g, beta));
    } else {
      double sum = 0;
      for (const auto& c : in.classes) sum += 1.0 - f_beta(table_after(in, c, fixed), beta);
      curve.push_back(sum / static_cast<double>(in.classes.size()));
    }
  }
  return curve;
}

/// Per-class residual error curves (for macro ER with excluded classes).
inline std::map<std::string, std::vector<double>> class_error_curves(const Instance& in,
                                                                     const std::vector<std::string>& order,
                                                                     double beta) {
  std::map<std::string, std::vector<double>> out;
  std::set<std::string> fixed;
  for (std::size_t n = 0; n <= order.size(); ++n) {
    if (n > 0) fixed.insert(order[n - 1]);
    for (const auto& c : in.classes) out[c].push_back(1.0 - f_beta(table_after(in, c, fixed), beta));
  }
  return out;
}

/// ER curve: micro from the global curve, macro as the mean of per-class ER
/// over classes with positive initial error.
inline std::vector<double> error_reduction(const Instance& in, const std::vector<std::string>& order, bool micro,
                                           double beta) {
  std::vector<double> er(order.size() + 1, 0.0);
  if (micro) {
    const auto e = error_curve(in, order, true, beta);
    for (std::size_t n = 0; n < e.size(); ++n) er[n] = (e[0] - e[n]) / e[0];
    return er;
  }
  const auto per_class = class_error_curves(in, order, beta);
  std::size_t included = 0;
  for (const auto& [c, e] : per_class) {
    if (e[0] <= 0) continue;
    ++included;
    for (std::size_t n = 0; n < e.size(); ++n) er[n] += (e[0] - e[n]) / e[0];
  }
  for (double& v : er) v /= static_cast<double>(included);
  return er;
}

/// Term-by-term ENER with p^{n-1} from std::pow.
inline double ener(const std::vector<double>& er, double p) {
  const std::size_t total = er.size() - 1;
  double sum = 0;
  for (std::size_t n = 1; n <= total; ++n) {
    const double ner = er[n] - static_cast<double>(n) / static_cast<double>(total);
    const double stop = n < total ? std::pow(p, static_cast<double>(n - 1)) * (1 - p)
                                  : std::pow(p, static_cast<double>(total - 1));
    sum += stop * ner;
  }
  return sum;
}

struct Trace {
  std::vector<std::string> order;
  std::vector<double> utilities;  // at selection time
};

/// The validation loop of `m` replayed step by step: gains recomputed from
/// the current tables before every pick, utilities summed class by class in
/// ascending class order, ties to the smallest document id.
inline Trace run(const Instance& in, const Method& m) {
  std::vector<std::string> docs = in.docs;
  std::vector<std::string> classes = in.classes;
  std::sort(docs.begin(), docs.end());
  std::sort(classes.begin(), classes.end());
  const double test_size = static_cast<double>(docs.size());

  std::map<std::string, Table> tables;
  Table global;
  for (const auto& c : classes) {
    Table raw;
    if (m.oracle_tables) {
      raw = table_after(in, c, {});
    } else {
      const Table& tr = m.train_counts.at(c);
      raw = {tr.tp * test_size / m.train_size, tr.fp * test_size / m.train_size, tr.fn * test_size / m.train_size};
    }
    global.tp += raw.tp;
    global.fp += raw.fp;
    global.fn += raw.fn;
    tables[c] = smooth(raw);
  }
  global = smooth(global);

  auto gains_of = [&](const std::string& c) -> Gains {
    switch (m.rule) {
      case Rule::unit:
        return {1, 1};
      case Rule::average:
        return average_gains(tables.at(c), m.beta);
      case Rule::pointwise:
        return pointwise_gains(tables.at(c), m.beta);
      case Rule::micro_average:
        return average_gains(global, m.beta);
      case Rule::micro_pointwise:
        return pointwise_gains(global, m.beta);
    }
    return {};
  };
  auto utility = [&](const std::string& d) {
    double u = 0;
    for (const auto& c : classes) {
      const bool pred = in.predicted(d, c);
      const double p = m.oracle_probs ? (pred != in.truth(d, c) ? 1.0 : 0.0)
                                      : error_probability(in.score.at({d, c}), m.sigma);
      const Gains g = gains_of(c);
      u += p * (pred ? g.fp : g.fn);
    }
    return u;
  };

  Trace trace;
  if (!m.dynamic) {
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& d : docs) scored.push_back({utility(d), d});
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto& [u, d] : scored) {
      trace.order.push_back(d);
      trace.utilities.push_back(u);
    }
    return trace;
  }

  std::set<std::string> done;
  while (done.size() < docs.size()) {
    std::string best;
    double best_u = 0;
    for (const auto& d : docs) {
      if (done.count(d)) continue;
      const double u = utility(d);
      if (best.empty() || u > best_u) {
        best = d;
        best_u = u;
      }
    }
    done.insert(best);
    trace.order.push_back(best);
    trace.utilities.push_back(best_u);
    for (const auto& c : classes) {
      const bool pred = in.predicted(best, c);
      if (pred == in.truth(best, c)) continue;
      auto fix = [&](Table& t) {
        if (pred) {
          t.fp -= 1;
        } else {
          t.tp += 1;
          t.fn -= 1;
        }
        t = smooth(t);
      };
      fix(tables[c]);
      fix(global);
    }
  }
  return trace;
}

}  // namespace naive
