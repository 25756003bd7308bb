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

// Inner loops of the ranking engine. Every variant must return results that
// are bit-identical to the scalar reference: vector lanes run over documents
// and each lane adds its per-class terms in ascending class order, with no
// fused multiply-add.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

namespace satc::simd {

enum class Isa : std::uint8_t { scalar, avx2, neon };

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Per-document expected utility.
///
/// `signed_probs` is class-major (num_classes rows of `out.size()` values).
/// Each value is the probability that the decision on that cell is wrong,
/// carrying the sign of the decision: +p for a positive decision (the error
/// would be a false positive), -p for a negative one (false negative). The
/// sign bit alone selects the gain, so -0.0 counts as negative.
///
///   out[i] = sum_j |v_ji| * (signbit(v_ji) ? gain_fn[j] : gain_fp[j])
using AccumulateFn = void (*)(std::span<const double> signed_probs, std::span<const double> gain_fp,
                              std::span<const double> gain_fn, std::span<double> out);

/// Index of the largest value among entries with active[i] != 0; the lowest
/// index wins ties. npos when nothing is active.
using ArgmaxFn = std::size_t (*)(std::span<const double> values,
                                 std::span<const std::uint8_t> active);

struct KernelTable {
  Isa isa;
  AccumulateFn accumulate_utilities;
  ArgmaxFn argmax_active;
};

namespace scalar {
void accumulate_utilities(std::span<const double> signed_probs, std::span<const double> gain_fp,
                          std::span<const double> gain_fn, std::span<double> out);
std::size_t argmax_active(std::span<const double> values, std::span<const std::uint8_t> active);
}  // namespace scalar

/// True if this binary carries a variant for `isa` and the CPU runs it.
bool isa_supported(Isa isa) noexcept;
/// Best supported variant on this machine.
Isa detected_isa() noexcept;
/// Variant used by the library. Starts as detected_isa(), unless the
/// SATC_ISA environment variable names a supported one ("scalar", "avx2",
/// "neon").
Isa active_isa() noexcept;
/// Switches the variant used by the library. Throws ConfigError if
/// unsupported.
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

/// Kernels of a specific variant (for equivalence tests and benchmarks).
/// Throws ConfigError if unsupported.
const KernelTable& kernels_for(Isa isa);
/// Kernels of the active variant.
const KernelTable& kernels();

}  // namespace satc::simd
