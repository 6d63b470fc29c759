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
#include <memory>
#include <span>
#include <vector>

#include "uqeval/metrics.hpp"
#include "uqeval/prob_ops.hpp"
#include "uqeval/tensor.hpp"

namespace uqeval {

// Log-likelihood maximisation over T: a uniform grid in log T picks the best
// bracket, golden-section search refines it.
struct TempSearchConfig {
  double lower = 1e-2;
  double upper = 1e2;
  double log_tolerance = 1e-4;
  std::size_t grid_size = 50;

  void validate() const;
  // Grid temperatures, ascending; the first and last are exactly lower/upper.
  std::vector<double> grid() const;
};

struct TemperatureFit {
  Temperature temperature{1.0};
  double log_likelihood = 0.0;
  // The grid maximum sat on an end of the search interval.
  bool boundary = false;
};

// Members of an ensemble prepared once for many temperature searches over
// member subsets and sample splits. Per-member true-class probabilities on
// the search grid are computed lazily and shared by every subset. Thread-safe
// for concurrent use.
class MemberPool {
 public:
  explicit MemberPool(const EvalDataset& dataset, TempSearchConfig search = {});
  // Single- or multi-member datasets sharing n, C and labels.
  explicit MemberPool(std::span<const EvalDataset> members, TempSearchConfig search = {});
  MemberPool(MemberPool&&) noexcept;
  MemberPool& operator=(MemberPool&&) noexcept;
  ~MemberPool();

  std::size_t size() const;
  std::size_t samples() const;
  std::size_t classes() const;
  const LabelVector& labels() const;
  const TempSearchConfig& search() const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::unique_ptr<Impl> impl_;
};

// Maximises the log-likelihood of the pooled prediction over T.
TemperatureFit find_temperature(const EvalDataset& validation,
                                PoolMode mode = PoolMode::kScaleThenPool,
                                const TempSearchConfig& cfg = {});

// Same, restricted to `members` of the pool and the sample indices `rows`.
TemperatureFit find_temperature(const MemberPool& pool, std::span<const std::size_t> members,
                                std::span<const std::size_t> rows, PoolMode mode);

// Test-time cross-validation settings.
struct CrossValidationConfig {
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  PoolMode mode = PoolMode::kScaleThenPool;
  BinningConfig binning{};
  std::size_t threads = 1;
};

// Metric estimated by fitting T on one half of the test set and scoring the
// other. split_values[2r] scores the second half of repeat r at the
// temperature fitted on its first half (temperatures[2r]); split_values[2r+1]
// is the reverse. std is the population standard deviation.
struct CalibratedResult {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> split_values;
  std::vector<double> temperatures;
  std::uint64_t seed = 0;

  friend bool operator==(const CalibratedResult&, const CalibratedResult&) = default;
};

struct HalfSplit {
  std::vector<std::size_t> first;   // ceil(n/2) indices, ascending
  std::vector<std::size_t> second;  // floor(n/2) indices, ascending
};

// One Fisher-Yates permutation per repeat from the stream
// derive_seed(seed, streams::kSplits); the first ceil(n/2) positions form the
// first half.
std::vector<HalfSplit> draw_splits(std::size_t samples, std::size_t repeats, std::uint64_t seed);

// Throws ValidationError when n < 4 or repeats == 0.
CalibratedResult calibrated_metric(const EvalDataset& test, MetricId metric,
                                   const CrossValidationConfig& cfg = {});

// Several metrics over the same splits and fitted temperatures; results align
// with `metrics`.
std::vector<CalibratedResult> calibrated_metrics(const EvalDataset& test,
                                                 std::span<const MetricId> metrics,
                                                 const CrossValidationConfig& cfg);
std::vector<CalibratedResult> calibrated_metrics(const MemberPool& pool,
                                                 std::span<const std::size_t> members,
                                                 std::span<const MetricId> metrics,
                                                 const CrossValidationConfig& cfg);

// Population mean and standard deviation.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);

}  // namespace uqeval
