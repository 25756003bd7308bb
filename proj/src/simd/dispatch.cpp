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
#include <atomic>
#include <cstdlib>

#include <fmt/core.h>

#include "satc/error.hpp"
#include "satc/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SATC_HAVE_AVX2_VARIANT 1
#else
#define SATC_HAVE_AVX2_VARIANT 0
#endif

#if defined(__aarch64__)
#define SATC_HAVE_NEON_VARIANT 1
#else
#define SATC_HAVE_NEON_VARIANT 0
#endif

namespace satc::simd {

#if SATC_HAVE_AVX2_VARIANT
namespace avx2 {
void accumulate_utilities(std::span<const double>, std::span<const double>, std::span<const double>,
                          std::span<double>);
std::size_t argmax_active(std::span<const double>, std::span<const std::uint8_t>);
}  // namespace avx2
#endif

#if SATC_HAVE_NEON_VARIANT
namespace neon {
void accumulate_utilities(std::span<const double>, std::span<const double>, std::span<const double>,
                          std::span<double>);
std::size_t argmax_active(std::span<const double>, std::span<const std::uint8_t>);
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::accumulate_utilities, &scalar::argmax_active};
#if SATC_HAVE_AVX2_VARIANT
constexpr KernelTable kAvx2{Isa::avx2, &avx2::accumulate_utilities, &avx2::argmax_active};
#endif
#if SATC_HAVE_NEON_VARIANT
constexpr KernelTable kNeon{Isa::neon, &neon::accumulate_utilities, &neon::argmax_active};
#endif

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("SATC_ISA")) {
    if (auto isa = parse_isa(env); isa && isa_supported(*isa)) return *isa;
  }
  return detected_isa();
}

std::atomic<Isa>& active_slot() noexcept {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if SATC_HAVE_AVX2_VARIANT
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
      return SATC_HAVE_NEON_VARIANT != 0;
  }
  return false;
}

Isa detected_isa() noexcept {
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw ConfigError(fmt::format("SIMD variant '{}' is not available on this machine", isa_name(isa)));
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  return std::nullopt;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw ConfigError(fmt::format("SIMD variant '{}' is not available on this machine", isa_name(isa)));
  }
  switch (isa) {
#if SATC_HAVE_AVX2_VARIANT
    case Isa::avx2: return kAvx2;
#endif
#if SATC_HAVE_NEON_VARIANT
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& kernels() { return kernels_for(active_isa()); }

}  // namespace satc::simd
