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

#include <cstddef>
#include <map>

#include "satc/calibration.hpp"
#include "satc/model.hpp"

namespace satc {

/// Per-class tp/fp/fn counted in cross-validation on the training set.
struct TrainingEstimates {
  std::map<ClassId, ContingencyTable> counts;
  std::size_t train_size = 1;
  std::size_t test_size = 1;

  void check() const;
  /// Throws LookupError for an unknown class.
  const ContingencyTable& training_counts(const ClassId& cls) const;
};

/// A test-set table estimate; smoothed tables have every cell >= 1.
struct EstimatedTable {
  ContingencyTable table;
  bool smoothed = false;
  friend bool operator==(const EstimatedTable&, const EstimatedTable&) = default;
};

/// Maximum-likelihood test-set estimate: training counts scaled by
/// test_size / train_size. tn is left unset.
ContingencyTable ml_estimate(const TrainingEstimates& est, const ClassId& cls);

/// Adds 1 to each of tp, fp and fn if any of them is below 1; otherwise
/// returns the table unchanged.
EstimatedTable smooth_on_demand(const ContingencyTable& table);

/// Counts CV decisions (sign of the score) against the training labels.
/// `train_size` defaults to the number of CV-scored documents.
TrainingEstimates derive_training_estimates(const CvScores& cv, std::size_t test_size,
                                            std::size_t train_size = 0);

}  // namespace satc
