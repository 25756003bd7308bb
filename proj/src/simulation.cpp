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
#include "satc/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include <fmt/core.h>

#include "satc/error.hpp"
#include "satc/random.hpp"
#include "satc/session.hpp"

namespace satc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SimulationRun simulate(const ScoreMatrix& scores, const LabelSet& gold, const RankingConfig& config,
                       std::span<const double> xis) {
  SimulationRun run;
  run.num_docs = scores.num_docs();
  run.xis.assign(xis.begin(), xis.end());
  const LabelSet truth = gold.restricted_to(scores.docs());

  auto start = Clock::now();
  if (config.strategy == Strategy::static_ranking) {
    const auto ranking = rank_static(scores, config);
    run.visit_order.reserve(ranking.size());
    for (const auto& r : ranking) run.visit_order.push_back(r.doc);
  } else {
    ValidationSession session(scores, config);
    const auto& model = session.model();
    std::vector<ClassId> flipped;
    while (auto doc = session.next()) {
      const std::size_t i = *model.doc_position(*doc);
      flipped.clear();
      for (std::size_t j = 0; j < model.num_classes(); ++j) {
        const bool positive = truth.contains(*doc, model.classes()[j]);
        if ((model.decision(i, j) > 0) != positive) flipped.push_back(model.classes()[j]);
      }
      session.apply_correction(*doc, flipped);
    }
    run.visit_order = session.visit_order();
  }
  run.rank_seconds = seconds_since(start);

  start = Clock::now();
  run.macro = evaluate_order(run.visit_order, scores, truth, Averaging::macro, config.effectiveness, xis);
  run.micro = evaluate_order(run.visit_order, scores, truth, Averaging::micro, config.effectiveness, xis);
  run.sweep_seconds = seconds_since(start);
  return run;
}

std::vector<double> resample_curve(std::span<const double> curve, std::size_t m) {
  if (curve.empty()) throw DataError("cannot resample an empty curve");
  const std::size_t s = curve.size() - 1;
  std::vector<double> out(m + 1);
  if (m == 0) {
    out[0] = curve[0];
    return out;
  }
  for (std::size_t i = 0; i <= m; ++i) {
    const std::size_t scaled = i * s;
    const std::size_t lo = scaled / m;
    const std::size_t rem = scaled % m;
    if (rem == 0) {
      out[i] = curve[lo];
    } else {
      const double w = static_cast<double>(rem) / static_cast<double>(m);
      out[i] = curve[lo] * (1.0 - w) + curve[lo + 1] * w;
    }
  }
  return out;
}

namespace {

AveragedReport average_reports(const std::vector<SimulationRun>& runs, Averaging averaging,
                               std::size_t m, std::span<const double> xis) {
  AveragedReport out;
  out.averaging = averaging;
  out.fraction.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) out.fraction[i] = static_cast<double>(i) / static_cast<double>(m);
  out.er.assign(m + 1, 0.0);
  std::vector<double> ener_sum(xis.size(), 0.0);
  std::vector<double> p_sum(xis.size(), 0.0);
  for (const auto& run : runs) {
    const auto& report = averaging == Averaging::macro ? run.macro : run.micro;
    const auto er = resample_curve(report.er, m);
    for (std::size_t i = 0; i <= m; ++i) out.er[i] += er[i];
    for (std::size_t k = 0; k < xis.size(); ++k) {
      ener_sum[k] += report.ener[k].value;
      p_sum[k] += report.ener[k].p;
    }
  }
  const double count = static_cast<double>(runs.size());
  for (double& v : out.er) v /= count;
  out.ner = normalized_error_reduction(out.er);
  for (std::size_t k = 0; k < xis.size(); ++k) {
    out.ener.push_back({xis[k], p_sum[k] / count, ener_sum[k] / count});
  }
  return out;
}

}  // namespace

SplitRun split_simulate(const ScoreMatrix& scores, const LabelSet& gold, const RankingConfig& config,
                        std::span<const double> xis, std::size_t k, std::uint64_t seed) {
  const std::size_t nd = scores.num_docs();
  if (k < 1 || k > nd) {
    throw ConfigError(fmt::format("cannot split {} documents into {} parts", nd, k));
  }
  SplitRun out;
  out.seed = seed;

  std::vector<std::size_t> rows(nd);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(rows));

  const std::size_t base = nd / k;
  const std::size_t extra = nd % k;
  std::size_t at = 0;
  std::size_t smallest = nd;
  for (std::size_t part = 0; part < k; ++part) {
    const std::size_t size = base + (part < extra ? 1 : 0);
    std::vector<std::size_t> part_rows(rows.begin() + static_cast<std::ptrdiff_t>(at),
                                       rows.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
    std::sort(part_rows.begin(), part_rows.end());
    smallest = std::min(smallest, size);

    const ScoreMatrix sub = scores.select_docs(part_rows);
    RankingConfig part_config = config;
    if (auto* est = std::get_if<TrainingEstimates>(&part_config.tables)) est->test_size = size;
    out.parts.push_back(sub.docs());
    out.runs.push_back(simulate(sub, gold, part_config, xis));
  }
  out.macro = average_reports(out.runs, Averaging::macro, smallest, xis);
  out.micro = average_reports(out.runs, Averaging::micro, smallest, xis);
  return out;
}

}  // namespace satc
