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
#include "satc/estimation.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "satc/error.hpp"

namespace satc {

void TrainingEstimates::check() const {
  if (train_size < 1) throw DataError("training estimates need a positive training-set size");
  for (const auto& [cls, t] : counts) {
    if (!t.valid()) throw DataError(fmt::format("invalid training counts for class '{}'", cls.str()));
  }
}

const ContingencyTable& TrainingEstimates::training_counts(const ClassId& cls) const {
  auto it = counts.find(cls);
  if (it == counts.end()) throw LookupError(fmt::format("no training estimates for class '{}'", cls.str()));
  return it->second;
}

ContingencyTable ml_estimate(const TrainingEstimates& est, const ClassId& cls) {
  const auto& tr = est.training_counts(cls);
  const double scale = static_cast<double>(est.test_size) / static_cast<double>(est.train_size);
  return ContingencyTable{tr.tp * scale, tr.fp * scale, tr.fn * scale, std::nullopt};
}

EstimatedTable smooth_on_demand(const ContingencyTable& table) {
  if (std::min({table.tp, table.fp, table.fn}) < 1.0) {
    ContingencyTable s = table;
    s.tp += 1.0;
    s.fp += 1.0;
    s.fn += 1.0;
    return {s, true};
  }
  return {table, false};
}

TrainingEstimates derive_training_estimates(const CvScores& cv, std::size_t test_size,
                                            std::size_t train_size) {
  TrainingEstimates est;
  est.test_size = test_size;
  est.train_size = train_size != 0 ? train_size : cv.scores.num_docs();
  auto tables = true_tables(cv.scores, cv.labels);
  for (std::size_t c = 0; c < tables.size(); ++c) {
    tables[c].tn.reset();
    est.counts.emplace(cv.scores.classes()[c], tables[c]);
  }
  est.check();
  return est;
}

}  // namespace satc
