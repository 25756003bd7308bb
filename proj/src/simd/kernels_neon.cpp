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

// AArch64 only. NEON is part of the base ISA there, so no runtime check.
#include <arm_neon.h>

#include <cmath>

#include "satc/simd/kernels.hpp"

namespace satc::simd::neon {

void accumulate_utilities(std::span<const double> signed_probs, std::span<const double> gain_fp,
                          std::span<const double> gain_fn, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t nc = gain_fp.size();
  const std::size_t vec_end = n - n % 2;
  double* dst = out.data();

  for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    const double* row = signed_probs.data() + j * n;
    const float64x2_t gfp = vdupq_n_f64(gain_fp[j]);
    const float64x2_t gfn = vdupq_n_f64(gain_fn[j]);
    std::size_t i = 0;
    for (; i < vec_end; i += 2) {
      const float64x2_t v = vld1q_f64(row + i);
      // Arithmetic shift smears the sign bit over the lane.
      const uint64x2_t neg = vreinterpretq_u64_s64(vshrq_n_s64(vreinterpretq_s64_f64(v), 63));
      const float64x2_t g = vbslq_f64(neg, gfn, gfp);
      // Separate multiply and add; vfmaq would round differently from scalar.
      const float64x2_t term = vmulq_f64(vabsq_f64(v), g);
      vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), term));
    }
    for (; i < n; ++i) {
      const double v = row[i];
      dst[i] += std::fabs(v) * (std::signbit(v) ? gain_fn[j] : gain_fp[j]);
    }
  }
}

std::size_t argmax_active(std::span<const double> values, std::span<const std::uint8_t> active) {
  // Selection is memory-bound and branchy; the scalar loop is already
  // bit-exact by definition.
  return scalar::argmax_active(values, active);
}

}  // namespace satc::simd::neon
