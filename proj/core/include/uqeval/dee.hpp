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

#include "uqeval/calibration.hpp"
#include "uqeval/metrics.hpp"
#include "uqeval/prob_ops.hpp"
#include "uqeval/tensor.hpp"

namespace uqeval {

// How ensembles of a given size are resampled from a pool and scored.
struct ResampleConfig {
  std::size_t resamples = 20;  // R subsets per size
  std::uint64_t seed = 0;
  PoolMode mode = PoolMode::kScaleThenPool;
  std::size_t repeats = 5;     // test-time cross-validation repeats per subset
  MetricId metric = MetricId::kLogLikelihood;
  BinningConfig binning{};
  std::size_t threads = 1;
};

// Member subsets of one size. When the pool has at most R distinct subsets of
// that size they are enumerated once each in lexicographic order; otherwise R
// subsets are drawn independently, each without replacement, from the stream
// derive_seed(derive_seed(seed, streams::kSubsets), size).
std::vector<std::vector<std::size_t>> draw_subsets(std::size_t population, std::size_t size,
                                                   std::size_t resamples, std::uint64_t seed);

// Calibrated metric statistics over the subsets of one size. Every subset is
// scored with the same split seed, so identical predictors score identically.
struct SizeStats {
  std::size_t size = 0;
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> values;  // one calibrated mean per subset
  bool exhaustive = false;
};

SizeStats resampled_metric(const MemberPool& pool, std::size_t size, const ResampleConfig& cfg);

// Reference curve of calibrated metric against ensemble size l = 1..L for a
// pool of independently trained models.
struct DeBaseline {
  MetricId metric = MetricId::kLogLikelihood;
  PoolMode mode = PoolMode::kScaleThenPool;
  std::size_t pool_size = 0;   // M
  std::size_t resamples = 0;   // R
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t classes = 0;
  std::uint64_t label_fingerprint = 0;
  std::vector<SizeStats> sizes;  // sizes[l-1] for l = 1..L

  std::size_t max_size() const { return sizes.size(); }
};

std::uint64_t label_fingerprint(const LabelVector& labels);

// Throws ValidationError unless 1 <= L <= M and the pool is label-consistent.
DeBaseline build_de_baseline(const MemberPool& pool, std::size_t max_size,
                             const ResampleConfig& cfg);
DeBaseline build_de_baseline(std::span<const EvalDataset> pool, std::size_t max_size,
                             const ResampleConfig& cfg);

struct DeeScore {
  std::size_t k = 0;
  double value = 1.0;
  double lower = 1.0;
  double upper = 1.0;
  bool saturated = false;        // value hit L without reaching the target
  bool lower_saturated = false;
  bool upper_saturated = false;
  double metric_mean = 0.0;      // the method's mean calibrated metric at k
  double metric_std = 0.0;
};

// Smallest real l >= 1 at which the piecewise-linear baseline reaches
// `metric_value` (oriented so that higher is better). lower uses mean + std,
// upper uses mean - std. Throws ValidationError when L < 2.
DeeScore dee_lookup(double metric_value, const DeBaseline& baseline);

// For each k, the method's mean calibrated metric over R resampled k-member
// ensembles, looked up against the baseline.
std::vector<DeeScore> dee_curve(const MemberPool& method_pool, const DeBaseline& baseline,
                                std::span<const std::size_t> k_grid, const ResampleConfig& cfg);
std::vector<DeeScore> dee_curve(std::span<const EvalDataset> method_pool,
                                const DeBaseline& baseline, std::span<const std::size_t> k_grid,
                                const ResampleConfig& cfg);

}  // namespace uqeval
