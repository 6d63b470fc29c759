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
#include <span>
#include <vector>

#include "uqeval/tensor.hpp"

namespace uqeval::detail {

inline constexpr double kProbFloor = 1e-300;

// Logits in double with each row's maximum subtracted, so every entry is
// <= 0 and exp never overflows.
struct ShiftedLogits {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  const double* row(std::size_t i) const { return values.data() + i * cols; }
};

ShiftedLogits shift_rows(const MemberView& member);
ShiftedLogits shift_rows(std::span<const double> logits, std::size_t rows, std::size_t cols);
// Rows listed in `rows`, in that order.
ShiftedLogits gather_rows(const ShiftedLogits& src, std::span<const std::size_t> rows);

// Selected rows regrouped into blocks of kLaneRows, class-major inside a
// block, with their labels. The tail block is padded with zero logits.
struct ClassMajorRows {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::uint64_t> labels;
};

ClassMajorRows class_major(const ShiftedLogits& src, std::span<const std::size_t> rows,
                           std::span<const std::uint32_t> labels);

// acc[r] += softmax(row r * inv_t)[label r]; bit-identical to the row-major
// kernels.
void accumulate_true_class(const ClassMajorRows& member, double inv_t, std::span<double> acc);

// Reusable buffers for the kernels below.
struct SoftmaxScratch {
  std::vector<double> exps;
  std::vector<double> sums;
};

// acc[i, c] += softmax(member_i * inv_t)[c].
void accumulate_probs(const ShiftedLogits& member, double inv_t, std::span<double> acc,
                      SoftmaxScratch& scratch);

// Pools members at `inv_t` into a row-normalised n x C buffer:
// (sum over members of softmax) / member count.
std::vector<double> pooled_probs(std::span<const ShiftedLogits* const> members, double inv_t);

// Shifted log(max(p, floor)) of the T = 1 pool, the single virtual member
// that pool-then-scale applies temperature to.
ShiftedLogits pooled_log_member(std::span<const ShiftedLogits* const> members);

}  // namespace uqeval::detail
