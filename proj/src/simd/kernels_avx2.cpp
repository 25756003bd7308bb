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

// Compiled with -mavx2 (and without -mfma); only reached after a runtime
// CPU check in dispatch.cpp.
#include <immintrin.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "satc/simd/kernels.hpp"

namespace satc::simd::avx2 {

void accumulate_utilities(std::span<const double> signed_probs, std::span<const double> gain_fp,
                          std::span<const double> gain_fn, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t nc = gain_fp.size();
  const std::size_t vec_end = n - n % 4;
  const __m256d sign = _mm256_set1_pd(-0.0);
  double* dst = out.data();

  for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    const double* row = signed_probs.data() + j * n;
    const __m256d gfp = _mm256_set1_pd(gain_fp[j]);
    const __m256d gfn = _mm256_set1_pd(gain_fn[j]);
    std::size_t i = 0;
    for (; i < vec_end; i += 4) {
      const __m256d v = _mm256_loadu_pd(row + i);
      // blendv picks from its second operand where the sign bit of v is set.
      const __m256d g = _mm256_blendv_pd(gfp, gfn, v);
      const __m256d p = _mm256_andnot_pd(sign, v);
      const __m256d acc = _mm256_loadu_pd(dst + i);
      _mm256_storeu_pd(dst + i, _mm256_add_pd(acc, _mm256_mul_pd(p, g)));
    }
    for (; i < n; ++i) {
      const double v = row[i];
      dst[i] += std::fabs(v) * (std::signbit(v) ? gain_fn[j] : gain_fp[j]);
    }
  }
}

std::size_t argmax_active(std::span<const double> values, std::span<const std::uint8_t> active) {
  const std::size_t n = values.size();
  const std::size_t vec_end = n - n % 4;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const __m256d floor = _mm256_set1_pd(neg_inf);
  __m256d best = floor;
  bool any_active = false;

  std::size_t i = 0;
  for (; i < vec_end; i += 4) {
    std::uint32_t bytes;
    std::memcpy(&bytes, active.data() + i, sizeof(bytes));
    if (bytes == 0) continue;
    any_active = true;
    // Widen each mask byte to a 64-bit lane: nonzero -> all ones.
    const __m256i lanes = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(bytes)));
    const __m256i on = _mm256_cmpgt_epi64(lanes, _mm256_setzero_si256());
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    best = _mm256_max_pd(best, _mm256_blendv_pd(floor, v, _mm256_castsi256_pd(on)));
  }
  double top = neg_inf;
  {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    for (double x : lanes) top = x > top ? x : top;
  }
  for (std::size_t k = vec_end; k < n; ++k) {
    if (active[k]) {
      any_active = true;
      top = values[k] > top ? values[k] : top;
    }
  }
  if (!any_active) return npos;
  if (top == neg_inf) return scalar::argmax_active(values, active);
  for (std::size_t k = 0; k < n; ++k) {
    if (active[k] && values[k] == top) return k;
  }
  return scalar::argmax_active(values, active);
}

}  // namespace satc::simd::avx2
