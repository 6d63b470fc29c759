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
#include <string_view>
#include <vector>

#include "uqeval/tensor.hpp"

namespace uqeval {

// Composition order of temperature scaling and ensemble averaging.
//   kScaleThenPool: mean over members of softmax(z_k / T).
//   kPoolThenScale: pool softmax(z_k) at T = 1, then softmax(log(pooled) / T).
// Both coincide exactly for a single member.
enum class PoolMode { kScaleThenPool, kPoolThenScale };

std::string_view to_string(PoolMode mode);
// Accepts "scale-then-pool" and "pool-then-scale"; throws ValidationError.
PoolMode parse_pool_mode(std::string_view text);

// Softmax temperature, restricted to the search interval [1e-2, 1e2].
class Temperature {
 public:
  static constexpr double kMin = 1e-2;
  static constexpr double kMax = 1e2;

  // Throws ValidationError for non-positive, non-finite or out-of-range values.
  explicit Temperature(double value);

  double value() const noexcept { return value_; }
  double inverse() const noexcept { return 1.0 / value_; }

  friend bool operator==(Temperature, Temperature) = default;

 private:
  double value_;
};

// Dense row-major n x C matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values).subspan(i * cols, cols);
  }
  double at(std::size_t i, std::size_t c) const { return values[i * cols + c]; }
};

// Per-sample predictive distributions. Rows sum to 1 within 1e-9 and every
// entry lies in [0, 1].
class ProbMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  ProbMatrix() = default;
  // Validates the invariants; throws ValidationError.
  ProbMatrix(std::size_t samples, std::size_t classes, std::vector<double> values);

  // Skips validation; for values produced by softmax kernels.
  static ProbMatrix from_normalized(std::size_t samples, std::size_t classes,
                                    std::vector<double> values);

  std::size_t samples() const noexcept { return samples_; }
  std::size_t classes() const noexcept { return classes_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * classes_, classes_);
  }
  double at(std::size_t i, std::size_t c) const { return values_[i * classes_ + c]; }

  // Rows listed in `rows`, in that order.
  ProbMatrix select_rows(std::span<const std::size_t> rows) const;

 private:
  std::size_t samples_ = 0;
  std::size_t classes_ = 0;
  std::vector<double> values_;
};

// log softmax(z / T) row by row, via max subtraction so no intermediate
// overflows for |z| up to 1e4.
Matrix log_softmax_temp(const MemberView& logits, Temperature temperature);

// Ensemble predictive distribution (unweighted member average).
ProbMatrix pool_members(const LogitTensor& logits, Temperature temperature,
                        PoolMode mode = PoolMode::kScaleThenPool);

// Shannon entropy in nats, with 0 ln 0 = 0.
std::vector<double> predictive_entropy(const ProbMatrix& probs);

struct Prediction {
  double confidence = 0.0;
  std::uint32_t predicted = 0;
};

// max_c p_ic and the lowest class index attaining it.
Prediction predict(std::span<const double> row);
std::vector<Prediction> confidence_argmax(const ProbMatrix& probs);

}  // namespace uqeval
