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
#include <string_view>

#include "satc/estimation.hpp"
#include "satc/model.hpp"

namespace satc {

/// How the value of correcting one error is computed.
enum class GainRule : std::uint8_t {
  unit,             // both gains 1: ranking by confidence alone
  average,          // per class, total improvement / error count
  pointwise,        // per class, improvement of the next single correction
  micro_average,    // average rule on the merged table, shared by all classes
  micro_pointwise,  // pointwise rule on the merged table
};

constexpr bool is_micro(GainRule rule) noexcept {
  return rule == GainRule::micro_average || rule == GainRule::micro_pointwise;
}

std::string_view gain_rule_name(GainRule rule) noexcept;
std::optional<GainRule> parse_gain_rule(std::string_view name) noexcept;

/// Effectiveness improvement from correcting one false positive / negative.
struct Gains {
  double fp = 0.0;
  double fn = 0.0;
  friend bool operator==(const Gains&, const Gains&) = default;
};

/// (F with every fp removed - F) / fp and (F with every fn turned into a tp -
/// F) / fn. Requires tp, fp, fn >= 1 (PreconditionError otherwise).
Gains average_gains(const ContingencyTable& table, const EffectivenessSpec& spec = {});
Gains average_gains(const EstimatedTable& table, const EffectivenessSpec& spec = {});

/// F(tp, fp-1, fn) - F and F(tp+1, fp, fn-1) - F. Requires tp, fp, fn >= 1.
Gains pointwise_gains(const ContingencyTable& table, const EffectivenessSpec& spec = {});
Gains pointwise_gains(const EstimatedTable& table, const EffectivenessSpec& spec = {});

enum class MicroFlavor : std::uint8_t { average, pointwise };

/// Gains on the merged (global) table; one pair shared by every class.
Gains micro_gains(const EstimatedTable& global, const EffectivenessSpec& spec, MicroFlavor flavor);

/// Dispatches on `rule`. Micro rules expect the merged table.
Gains gains_for(GainRule rule, const ContingencyTable& table, const EffectivenessSpec& spec);

}  // namespace satc
