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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "detail/softmax.hpp"
#include "test_support.hpp"

namespace uqeval::detail {
namespace {

TEST(ExpKernel, MatchesLongDoubleExp) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> wide(-708.0, 709.0);
  std::uniform_real_distribution<double> narrow(-40.0, 0.0);
  std::vector<double> in(200000);
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = k % 2 ? wide(gen) : narrow(gen);
  std::vector<double> out(in.size());
  scaled_exp(in.data(), 1.0, out.data(), in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    const long double ref = std::exp(static_cast<long double>(in[k]));
    ASSERT_LE(std::fabs(static_cast<long double>(out[k]) / ref - 1.0L), 5e-16L) << in[k];
  }
}

TEST(ExpKernel, EdgeValues) {
  EXPECT_EQ(exp_scalar(0.0), 1.0);
  EXPECT_EQ(exp_scalar(-1000.0), 0.0);
  EXPECT_EQ(exp_scalar(-708.5), 0.0);
  EXPECT_GT(exp_scalar(-708.0), 0.0);
  EXPECT_TRUE(std::isfinite(exp_scalar(1e6)));
  EXPECT_NEAR(exp_scalar(1.0) / std::exp(1.0), 1.0, 5e-16);
}

TEST(ExpKernel, ScaledMatchesScalar) {
  std::vector<double> in = {-3.0, -0.5, 0.0, -100.0, -1e4};
  std::vector<double> out(in.size());
  scaled_exp(in.data(), 0.25, out.data(), in.size());
  for (std::size_t k = 0; k < in.size(); ++k) EXPECT_EQ(out[k], exp_scalar(in[k] * 0.25));
}

TEST(ExpKernel, ClassMajorBlockEqualsRowMajorPooling) {
  // Every code path that produces a true-class probability must agree to the
  // last bit, so grid and golden-section objectives are comparable.
  std::mt19937_64 gen(4);
  const auto d = testing::random_dataset(gen, 1, 150, 7, 30.0);
  const auto shifted = shift_rows(d.logits.member(0));
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < 150; i += 2) rows.push_back(i);
  const auto cm = class_major(shifted, rows, d.labels.values());
  for (double inv_t : {0.01, 0.37, 1.0, 4.0, 100.0}) {
    std::vector<double> acc(rows.size(), 0.0);
    accumulate_true_class(cm, inv_t, acc);
    const auto gathered = gather_rows(shifted, rows);
    const ShiftedLogits* ptr[] = {&gathered};
    const auto probs = pooled_probs(ptr, inv_t);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      ASSERT_EQ(acc[j], probs[j * 7 + d.labels[rows[j]]]) << j << " at " << inv_t;
    }
  }
}

}  // namespace
}  // namespace uqeval::detail
