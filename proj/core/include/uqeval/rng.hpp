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
#include <vector>

namespace uqeval {

// SplitMix64: the k-th output of a stream seeded with `s` is
// mix64(s + k * 0x9E3779B97F4A7C15), k = 1, 2, ... This is the single pinned
// generator behind every split, subset and synthetic draw; see docs/rng.md
// for the full algorithm and test vectors.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  // Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  // bound must be >= 1.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;

  // (next >> 11) * 2^-53, in [0, 1).
  double uniform01() noexcept;
  // ((next >> 11) + 0.5) * 2^-53, in (0, 1).
  double uniform_open01() noexcept;
  // Standard normal by inverting the CDF at uniform_open01().
  double normal() noexcept;

  // Fisher-Yates from the identity: for i = n-1 down to 1, swap(p[i],
  // p[uniform_index(i+1)]).
  std::vector<std::size_t> permutation(std::size_t n);

  // Partial Fisher-Yates over [0, population): for i = 0..count-1 swap p[i]
  // with p[i + uniform_index(population - i)]; the first `count` entries are
  // returned sorted ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                      std::size_t count);

  static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Seed of an independent child stream: mix64(mix64(parent) + (stream + 1) * gamma).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  return Rng::mix64(Rng::mix64(parent) + (stream + 1) * Rng::kGamma);
}

// Stream ids used across the library. Changing any of these changes every
// reported number.
namespace streams {
inline constexpr std::uint64_t kSplits = 1;
inline constexpr std::uint64_t kSubsets = 2;
inline constexpr std::uint64_t kSynthBase = 10;
inline constexpr std::uint64_t kSynthShared = 11;
inline constexpr std::uint64_t kSynthMember = 12;
}  // namespace streams

// Inverse of the standard normal CDF, accurate to ~1e-15 relative on (0, 1):
// Acklam's rational approximation followed by one Halley step against erfc.
double inverse_normal_cdf(double p) noexcept;

}  // namespace uqeval
