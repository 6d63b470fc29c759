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

#pragma once

#include <cstddef>
#include <cstdint>

namespace uqeval::detail {

// out[j] = exp(in[j] * scale) for j < count. Arguments below -708.39 flush
// to exactly 0. Relative error is below 5e-16 against a correctly rounded
// exp on [-708, 0]; the result is bit-identical on every instruction set the
// kernel is dispatched to.
void scaled_exp(const double* in, double scale, double* out, std::size_t count);

double exp_scalar(double x);

// Rows per block of the class-major layout.
inline constexpr std::size_t kLaneRows = 64;

// One block of kLaneRows rows stored class-major, z[c * kLaneRows + r].
// sums[r] = sum over c, in class order, of exp(z * scale); trues[r] is the
// term for class labels[r]. Each term equals scaled_exp of the same input.
void softmax_true_block(const double* z, const std::uint64_t* labels, double scale,
                        std::size_t classes, double* sums, double* trues);

}  // namespace uqeval::detail
