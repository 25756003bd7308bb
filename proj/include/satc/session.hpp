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
#include <optional>
#include <span>
#include <vector>

#include "satc/ranking.hpp"

namespace satc {

/// An annotator working down a ranking, one document at a time.
///
/// Static sessions serve the precomputed ranking. Dynamic sessions pick the
/// unvalidated document of highest utility on every call to next(), with
/// gains refreshed after each correction. Both keep the table estimates up to
/// date. Single writer: calls must be serialized by the caller.
class ValidationSession {
 public:
  ValidationSession(const ScoreMatrix& scores, const RankingConfig& config);

  /// Document to validate next, or nullopt once every document has been
  /// validated. Repeated calls return the same document until it is
  /// submitted.
  std::optional<DocId> next();

  /// Records the annotator's verdict on the document returned by next():
  /// `flipped` lists the classes whose predicted label was wrong. Throws
  /// ProtocolError for any other document and LookupError for unknown
  /// classes; on error the session is unchanged.
  void apply_correction(const DocId& doc, std::span<const ClassId> flipped);

  bool exhausted() const noexcept { return validated_ == model_.num_docs(); }
  std::size_t remaining() const noexcept { return model_.num_docs() - validated_; }
  std::size_t validated_count() const noexcept { return validated_; }
  std::optional<DocId> pending() const;

  /// Documents in the order they were served and submitted.
  const std::vector<DocId>& visit_order() const noexcept { return visit_order_; }
  /// Utility of each visited document at the time it was selected.
  const std::vector<double>& visit_utilities() const noexcept { return visit_utilities_; }

  const UtilityModel& model() const noexcept { return model_; }
  double estimated_f_macro() const { return model_.estimated_f_macro(); }
  double estimated_f_micro() const { return model_.estimated_f_micro(); }

 private:
  UtilityModel model_;
  std::vector<double> utilities_;
  std::vector<std::uint8_t> active_;
  std::vector<std::size_t> static_order_;
  std::size_t cursor_ = 0;
  std::optional<std::size_t> pending_;
  std::size_t validated_ = 0;
  std::vector<DocId> visit_order_;
  std::vector<double> visit_utilities_;
};

}  // namespace satc
