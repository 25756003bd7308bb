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
#include <cmath>

#include "satc/simd/kernels.hpp"

namespace satc::simd::scalar {

void accumulate_utilities(std::span<const double> signed_probs, std::span<const double> gain_fp,
                          std::span<const double> gain_fn, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t nc = gain_fp.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    const double* row = signed_probs.data() + j * n;
    const double gfp = gain_fp[j];
    const double gfn = gain_fn[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double v = row[i];
      out[i] += std::fabs(v) * (std::signbit(v) ? gfn : gfp);
    }
  }
}

std::size_t argmax_active(std::span<const double> values, std::span<const std::uint8_t> active) {
  std::size_t best = npos;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (active[i] && (best == npos || values[i] > values[best])) best = i;
  }
  return best;
}

}  // namespace satc::simd::scalar
