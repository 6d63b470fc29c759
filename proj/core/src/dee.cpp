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

#include "uqeval/dee.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>

#include "uqeval/error.hpp"
#include "uqeval/parallel.hpp"
#include "uqeval/rng.hpp"

namespace uqeval {

namespace {

// min(C(n, k), cap + 1) without overflow.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  unsigned __int128 value = 1;
  for (std::size_t j = 1; j <= k; ++j) {
    value = value * (n - k + j) / j;
    if (value > cap) return cap + 1;
  }
  return static_cast<std::size_t>(value);
}

std::vector<std::vector<std::size_t>> all_combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current(k);
  std::iota(current.begin(), current.end(), std::size_t{0});
  while (true) {
    out.push_back(current);
    std::size_t i = k;
    while (i > 0 && current[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

struct CurveTask {
  std::size_t size;
  std::size_t subset;
};

// Scores every subset of every requested size, parallel across subsets.
std::vector<SizeStats> score_sizes(const MemberPool& pool, std::span<const std::size_t> sizes,
                                   const ResampleConfig& cfg) {
  if (cfg.resamples == 0) throw ValidationError("resample count must be >= 1");
  std::vector<std::vector<std::vector<std::size_t>>> subsets;
  std::vector<CurveTask> tasks;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    if (sizes[s] < 1 || sizes[s] > pool.size()) {
      throw ValidationError("ensemble size " + std::to_string(sizes[s]) +
                            " outside [1, " + std::to_string(pool.size()) + "]");
    }
    subsets.push_back(draw_subsets(pool.size(), sizes[s], cfg.resamples, cfg.seed));
    for (std::size_t j = 0; j < subsets.back().size(); ++j) tasks.push_back({s, j});
  }

  CrossValidationConfig cv;
  cv.repeats = cfg.repeats;
  cv.seed = cfg.seed;
  cv.mode = cfg.mode;
  cv.binning = cfg.binning;
  cv.threads = 1;
  const MetricId metric[] = {cfg.metric};

  std::vector<std::vector<double>> values(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) values[s].resize(subsets[s].size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) {
    const auto& task = tasks[t];
    const auto res = calibrated_metrics(pool, subsets[task.size][task.subset], metric, cv);
    values[task.size][task.subset] = res.front().mean;
  });

  std::vector<SizeStats> out(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    out[s].size = sizes[s];
    out[s].exhaustive = binomial_capped(pool.size(), sizes[s], cfg.resamples) <= cfg.resamples;
    const auto stats = mean_std(values[s]);
    out[s].mean = stats.mean;
    out[s].std = stats.std;
    out[s].values = std::move(values[s]);
  }
  return out;
}

double oriented(double v, MetricId metric) { return higher_is_better(metric) ? v : -v; }

// Smallest l in [1, L] where the interpolant of `curve` reaches `target`.
// Returns {L, true} when it never does.
std::pair<double, bool> smallest_crossing(const std::vector<double>& curve, double target) {
  if (curve.front() >= target) return {1.0, false};
  for (std::size_t j = 0; j + 1 < curve.size(); ++j) {
    if (curve[j + 1] >= target) {
      const double frac = (target - curve[j]) / (curve[j + 1] - curve[j]);
      return {static_cast<double>(j + 1) + std::clamp(frac, 0.0, 1.0), false};
    }
  }
  return {static_cast<double>(curve.size()), true};
}

MemberPool pool_from(std::span<const EvalDataset> datasets) {
  if (datasets.empty()) throw ValidationError("model pool is empty");
  return MemberPool(datasets);
}

}  // namespace

std::vector<std::vector<std::size_t>> draw_subsets(std::size_t population, std::size_t size,
                                                   std::size_t resamples, std::uint64_t seed) {
  if (size < 1 || size > population) throw ValidationError("subset size outside [1, population]");
  if (binomial_capped(population, size, resamples) <= resamples) {
    return all_combinations(population, size);
  }
  Rng rng(derive_seed(derive_seed(seed, streams::kSubsets), size));
  std::vector<std::vector<std::size_t>> out;
  out.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    out.push_back(rng.sample_without_replacement(population, size));
  }
  return out;
}

SizeStats resampled_metric(const MemberPool& pool, std::size_t size, const ResampleConfig& cfg) {
  const std::size_t sizes[] = {size};
  return score_sizes(pool, sizes, cfg).front();
}

std::uint64_t label_fingerprint(const LabelVector& labels) {
  std::uint64_t h = Rng::mix64(labels.size());
  for (std::uint32_t y : labels.values()) h = Rng::mix64(h ^ (y + Rng::kGamma));
  return h;
}

DeBaseline build_de_baseline(const MemberPool& pool, std::size_t max_size,
                             const ResampleConfig& cfg) {
  if (max_size < 1 || max_size > pool.size()) {
    throw ValidationError("baseline size L=" + std::to_string(max_size) +
                          " must satisfy 1 <= L <= M=" + std::to_string(pool.size()));
  }
  std::vector<std::size_t> sizes(max_size);
  std::iota(sizes.begin(), sizes.end(), std::size_t{1});

  DeBaseline out;
  out.metric = cfg.metric;
  out.mode = cfg.mode;
  out.pool_size = pool.size();
  out.resamples = cfg.resamples;
  out.repeats = cfg.repeats;
  out.seed = cfg.seed;
  out.samples = pool.samples();
  out.classes = pool.classes();
  out.label_fingerprint = label_fingerprint(pool.labels());
  out.sizes = score_sizes(pool, sizes, cfg);
  return out;
}

DeBaseline build_de_baseline(std::span<const EvalDataset> pool, std::size_t max_size,
                             const ResampleConfig& cfg) {
  return build_de_baseline(pool_from(pool), max_size, cfg);
}

DeeScore dee_lookup(double metric_value, const DeBaseline& baseline) {
  if (baseline.max_size() < 2) {
    throw ValidationError("DEE lookup needs a baseline with L >= 2");
  }
  std::vector<double> mean;
  std::vector<double> plus;
  std::vector<double> minus;
  for (const auto& s : baseline.sizes) {
    const double m = oriented(s.mean, baseline.metric);
    mean.push_back(m);
    plus.push_back(m + s.std);
    minus.push_back(m - s.std);
  }
  const double target = oriented(metric_value, baseline.metric);
  DeeScore out;
  std::tie(out.value, out.saturated) = smallest_crossing(mean, target);
  std::tie(out.lower, out.lower_saturated) = smallest_crossing(plus, target);
  std::tie(out.upper, out.upper_saturated) = smallest_crossing(minus, target);
  out.metric_mean = metric_value;
  return out;
}

std::vector<DeeScore> dee_curve(const MemberPool& method_pool, const DeBaseline& baseline,
                                std::span<const std::size_t> k_grid, const ResampleConfig& cfg) {
  if (cfg.metric != baseline.metric) {
    throw ValidationError("method metric differs from the baseline metric");
  }
  if (method_pool.samples() != baseline.samples || method_pool.classes() != baseline.classes ||
      label_fingerprint(method_pool.labels()) != baseline.label_fingerprint) {
    throw ValidationError("label mismatch between method pool and baseline pool");
  }
  for (std::size_t k : k_grid) {
    if (k < 1 || k > method_pool.size()) {
      throw ValidationError("k=" + std::to_string(k) + " exceeds the method pool size " +
                            std::to_string(method_pool.size()));
    }
  }
  const auto stats = score_sizes(method_pool, k_grid, cfg);
  std::vector<DeeScore> out;
  out.reserve(stats.size());
  for (const auto& s : stats) {
    auto score = dee_lookup(s.mean, baseline);
    score.k = s.size;
    score.metric_std = s.std;
    out.push_back(score);
  }
  return out;
}

std::vector<DeeScore> dee_curve(std::span<const EvalDataset> method_pool,
                                const DeBaseline& baseline, std::span<const std::size_t> k_grid,
                                const ResampleConfig& cfg) {
  return dee_curve(pool_from(method_pool), baseline, k_grid, cfg);
}

}  // namespace uqeval
