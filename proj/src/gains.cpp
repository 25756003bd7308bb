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
#include "satc/gains.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "satc/error.hpp"

namespace satc {

namespace {

void require_smoothed(const ContingencyTable& t) {
  if (!(std::min({t.tp, t.fp, t.fn}) >= 1.0)) {
    throw PreconditionError(fmt::format(
        "validation gains need tp, fp, fn >= 1 (got {}, {}, {}); smooth the table first", t.tp,
        t.fp, t.fn));
  }
}

}  // namespace

std::string_view gain_rule_name(GainRule rule) noexcept {
  switch (rule) {
    case GainRule::unit: return "unit";
    case GainRule::average: return "average";
    case GainRule::pointwise: return "pointwise";
    case GainRule::micro_average: return "micro_average";
    case GainRule::micro_pointwise: return "micro_pointwise";
  }
  return "unknown";
}

std::optional<GainRule> parse_gain_rule(std::string_view name) noexcept {
  for (auto r : {GainRule::unit, GainRule::average, GainRule::pointwise, GainRule::micro_average,
                 GainRule::micro_pointwise}) {
    if (gain_rule_name(r) == name) return r;
  }
  return std::nullopt;
}

Gains average_gains(const ContingencyTable& t, const EffectivenessSpec& spec) {
  require_smoothed(t);
  const double f = f_beta(t, spec);
  const double f_no_fp = f_beta({t.tp, 0.0, t.fn, std::nullopt}, spec);
  const double f_no_fn = f_beta({t.tp + t.fn, t.fp, 0.0, std::nullopt}, spec);
  return {(f_no_fp - f) / t.fp, (f_no_fn - f) / t.fn};
}

Gains average_gains(const EstimatedTable& table, const EffectivenessSpec& spec) {
  return average_gains(table.table, spec);
}

Gains pointwise_gains(const ContingencyTable& t, const EffectivenessSpec& spec) {
  require_smoothed(t);
  const double f = f_beta(t, spec);
  const double f_fp = f_beta({t.tp, t.fp - 1.0, t.fn, std::nullopt}, spec);
  const double f_fn = f_beta({t.tp + 1.0, t.fp, t.fn - 1.0, std::nullopt}, spec);
  return {f_fp - f, f_fn - f};
}

Gains pointwise_gains(const EstimatedTable& table, const EffectivenessSpec& spec) {
  return pointwise_gains(table.table, spec);
}

Gains micro_gains(const EstimatedTable& global, const EffectivenessSpec& spec, MicroFlavor flavor) {
  return flavor == MicroFlavor::average ? average_gains(global, spec) : pointwise_gains(global, spec);
}

Gains gains_for(GainRule rule, const ContingencyTable& table, const EffectivenessSpec& spec) {
  switch (rule) {
    case GainRule::unit: return {1.0, 1.0};
    case GainRule::average:
    case GainRule::micro_average: return average_gains(table, spec);
    case GainRule::pointwise:
    case GainRule::micro_pointwise: return pointwise_gains(table, spec);
  }
  throw ConfigError("unknown gain rule");
}

}  // namespace satc
