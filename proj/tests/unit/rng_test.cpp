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

// Expected values were produced by an independent Python SplitMix64 (the
// reference listing in docs/rng.md) and scipy.stats.norm.ppf.

#include "uqeval/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace uqeval {
namespace {

TEST(Rng, RawOutputsMatchReference) {
  Rng r(0);
  const std::uint64_t expected[] = {0xe220a8397b1dcdafULL, 0x6e789e6aa1b965f4ULL,
                                    0x06c45d188009454fULL, 0xf88bb8a8724c81ecULL,
                                    0x1b39896a51a8749bULL};
  for (auto e : expected) EXPECT_EQ(r.next_u64(), e);

  Rng s(0x123456789ABCDEF0ULL);
  EXPECT_EQ(s.next_u64(), 0x161922c645ce50e8ULL);
  EXPECT_EQ(s.next_u64(), 0xad760cafa1697b60ULL);
  EXPECT_EQ(s.next_u64(), 0x3501ff44902ca50dULL);
}

TEST(Rng, DerivedSeedsMatchReference) {
  EXPECT_EQ(derive_seed(0, 1), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(derive_seed(42, 2), 0x2a990be63a01b2d5ULL);
  EXPECT_EQ(derive_seed(7, 10), 0xe993e4ae36580724ULL);
  static_assert(derive_seed(42, 2) == 0x2a990be63a01b2d5ULL);
}

TEST(Rng, UniformIndexMatchesReference) {
  Rng r(7);
  const std::uint64_t ten[] = {3, 0, 9, 5, 4, 2, 4, 3, 1, 4, 1, 9};
  for (auto e : ten) EXPECT_EQ(r.uniform_index(10), e);
  Rng t(7);
  const std::uint64_t three[] = {1, 0, 2, 1, 1, 0, 1, 0, 0, 1, 0, 2};
  for (auto e : three) EXPECT_EQ(t.uniform_index(3), e);
}

TEST(Rng, UniformIndexStaysInRangeAndCoversIt) {
  Rng r(123);
  std::map<std::uint64_t, int> counts;
  for (int k = 0; k < 7000; ++k) {
    const auto v = r.uniform_index(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  ASSERT_EQ(counts.size(), 7u);
  for (const auto& [v, c] : counts) EXPECT_NEAR(c, 1000, 150) << v;
  EXPECT_EQ(Rng(5).uniform_index(1), 0u);
}

TEST(Rng, UnitIntervalDraws) {
  Rng a(99);
  EXPECT_EQ(a.uniform01(), 0.2615304715693846);
  EXPECT_EQ(a.uniform01(), 0.0316577610861849);
  EXPECT_EQ(a.uniform01(), 0.8347597245449443);
  Rng b(99);
  EXPECT_EQ(b.uniform_open01(), 0.26153047156938464);
  EXPECT_EQ(b.uniform_open01(), 0.031657761086184955);
}

TEST(Rng, OpenIntervalNeverTouchesEnds) {
  Rng r(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = r.uniform_open01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, PermutationMatchesReference) {
  Rng r(5);
  EXPECT_EQ(r.permutation(10), (std::vector<std::size_t>{2, 8, 4, 9, 5, 7, 0, 1, 6, 3}));
  Rng s(derive_seed(0, streams::kSplits));
  EXPECT_EQ(s.permutation(8), (std::vector<std::size_t>{7, 4, 3, 6, 0, 5, 1, 2}));
  EXPECT_TRUE(Rng(1).permutation(0).empty());
  EXPECT_EQ(Rng(1).permutation(1), std::vector<std::size_t>{0});
}

TEST(Rng, PermutationIsABijection) {
  Rng r(77);
  for (std::size_t n : {2u, 5u, 33u, 1000u}) {
    auto p = r.permutation(n);
    std::sort(p.begin(), p.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(p[i], i);
  }
}

TEST(Rng, SampleWithoutReplacement) {
  Rng r(5);
  EXPECT_EQ(r.sample_without_replacement(16, 5), (std::vector<std::size_t>{0, 4, 5, 6, 12}));
  Rng s(3);
  for (int k = 0; k < 200; ++k) {
    const auto v = s.sample_without_replacement(9, 4);
    ASSERT_EQ(v.size(), 4u);
    ASSERT_TRUE(std::is_sorted(v.begin(), v.end()));
    ASSERT_TRUE(std::adjacent_find(v.begin(), v.end()) == v.end());
    ASSERT_LT(v.back(), 9u);
  }
  EXPECT_EQ(Rng(2).sample_without_replacement(4, 4), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Rng, NormalDrawsMatchReference) {
  Rng r(11);
  const double expected[] = {-0.47822680537150136, -0.6360707587110489, 0.35323093771133196,
                             0.01156591895090442, -0.9733384848684216};
  for (double e : expected) EXPECT_NEAR(r.normal(), e, 1e-14);
}

TEST(InverseNormalCdf, MatchesScipyAcrossRegions) {
  const std::pair<double, double> cases[] = {
      {1e-300, -37.0470962993612}, {1e-12, -7.034483825301131}, {0.001, -3.090232306167813},
      {0.02425, -1.972961051311885}, {0.3, -0.5244005127080409}, {0.9, 1.2815515655446004},
      {0.97575, 1.972961051311885},  {0.999999, 4.753424308817087}};
  for (auto [p, x] : cases) {
    EXPECT_NEAR(inverse_normal_cdf(p), x, 1e-9 * std::max(1.0, std::fabs(x))) << p;
  }
  EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
}

TEST(InverseNormalCdf, IsAntisymmetricAndMonotone) {
  double prev = -HUGE_VAL;
  for (int k = 1; k < 1000; ++k) {
    const double p = k / 1000.0;
    const double x = inverse_normal_cdf(p);
    ASSERT_GT(x, prev);
    prev = x;
    ASSERT_NEAR(x, -inverse_normal_cdf(1.0 - p), 1e-12);
  }
}

TEST(InverseNormalCdf, RoundTripsThroughErfc) {
  Rng r(8);
  for (int k = 0; k < 2000; ++k) {
    const double p = r.uniform_open01();
    const double x = inverse_normal_cdf(p);
    ASSERT_NEAR(0.5 * std::erfc(-x / std::sqrt(2.0)), p, 1e-15 + 1e-13 * p);
  }
}

TEST(Rng, NormalMomentsMatchStandardGaussian) {
  Rng r(2024);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = r.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 5.0 * std::sqrt(1.0 / n));
  // Five standard errors: sqrt(2 / n) for the variance, sqrt(1 / n) for the mean.
  EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

}  // namespace
}  // namespace uqeval
