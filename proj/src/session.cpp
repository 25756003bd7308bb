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
#include "satc/session.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/core.h>

#include "satc/error.hpp"
#include "satc/simd/kernels.hpp"

namespace satc {

ValidationSession::ValidationSession(const ScoreMatrix& scores, const RankingConfig& config)
    : model_(scores, config), utilities_(model_.num_docs()), active_(model_.num_docs(), 1) {
  model_.compute_utilities(utilities_);
  if (config.strategy == Strategy::static_ranking) {
    static_order_.resize(model_.num_docs());
    std::iota(static_order_.begin(), static_order_.end(), std::size_t{0});
    std::stable_sort(static_order_.begin(), static_order_.end(),
                     [&](std::size_t a, std::size_t b) { return utilities_[a] > utilities_[b]; });
  }
}

std::optional<DocId> ValidationSession::next() {
  if (!pending_) {
    if (exhausted()) return std::nullopt;
    std::size_t pick;
    if (!static_order_.empty()) {
      pick = static_order_[cursor_];
    } else {
      pick = simd::kernels().argmax_active(utilities_, active_);
    }
    pending_ = pick;
  }
  return model_.docs()[*pending_];
}

std::optional<DocId> ValidationSession::pending() const {
  if (!pending_) return std::nullopt;
  return model_.docs()[*pending_];
}

void ValidationSession::apply_correction(const DocId& doc, std::span<const ClassId> flipped) {
  if (!pending_ || model_.docs()[*pending_] != doc) {
    throw ProtocolError(fmt::format("document '{}' is not the one currently served", doc.str()));
  }
  std::vector<std::size_t> classes;
  classes.reserve(flipped.size());
  for (const auto& cls : flipped) {
    const auto j = model_.class_position(cls);
    if (!j) throw LookupError(fmt::format("unknown class '{}'", cls.str()));
    classes.push_back(*j);
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  const std::size_t i = *pending_;
  for (std::size_t j : classes) model_.apply_flip(i, j);

  visit_order_.push_back(doc);
  visit_utilities_.push_back(utilities_[i]);
  active_[i] = 0;
  pending_.reset();
  ++validated_;
  ++cursor_;

  if (model_.config().updates_gains() && !classes.empty() && !exhausted()) {
    model_.compute_utilities(utilities_);
  }
}

}  // namespace satc
