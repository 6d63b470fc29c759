// Copyright 2026 The uqeval Authors.
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

#include "detail/exp_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace uqeval::detail {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
// 1.5 * 2^52: adding it rounds to the nearest integer in the low mantissa bits.
constexpr double kRoundShift = 6755399441055744.0;
constexpr double kUnderflow = -708.39;
constexpr double kOverflow = 709.0;

inline double exp_core(double x) {
  const bool underflow = x < kUnderflow;
  x = std::max(x, kUnderflow);
  x = std::min(x, kOverflow);
  const double shifted = x * kLog2e + kRoundShift;
  const double k = shifted - kRoundShift;
  const double r = (x - k * kLn2Hi) - k * kLn2Lo;
  // Taylor series to degree 12; |r| <= ln2/2 keeps the truncation below 1 ulp.
  double p = 1.0 / 479001600.0;
  p = p * r + 1.0 / 39916800.0;
  p = p * r + 1.0 / 3628800.0;
  p = p * r + 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;
  // The low bits of `shifted` hold k; rebuild 2^k directly in the exponent.
  const std::uint64_t kbits = std::bit_cast<std::uint64_t>(shifted);
  const double scale = std::bit_cast<double>((kbits + 1023) << 52);
  return underflow ? 0.0 : p * scale;
}

}  // namespace

__attribute__((target_clones("avx512f", "avx2", "default")))
void scaled_exp(const double* __restrict in, double scale, double* __restrict out,
                std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) out[j] = exp_core(in[j] * scale);
}

__attribute__((target_clones("avx512f", "avx2", "default")))
void softmax_true_block(const double* __restrict z, const std::uint64_t* __restrict labels,
                        double scale, std::size_t classes, double* __restrict sums,
                        double* __restrict trues) {
  for (std::size_t r = 0; r < kLaneRows; ++r) {
    sums[r] = 0.0;
    trues[r] = 0.0;
  }
  for (std::size_t c = 0; c < classes; ++c) {
    const double* zc = z + c * kLaneRows;
    for (std::size_t r = 0; r < kLaneRows; ++r) {
      const double e = exp_core(zc[r] * scale);
      sums[r] += e;
      trues[r] = labels[r] == c ? e : trues[r];
    }
  }
}

double exp_scalar(double x) { return exp_core(x); }

}  // namespace uqeval::detail
