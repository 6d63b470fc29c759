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

#include "uqeval/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>

#include "detail/softmax.hpp"
#include "uqeval/error.hpp"
#include "uqeval/parallel.hpp"
#include "uqeval/rng.hpp"

namespace uqeval {

using detail::ShiftedLogits;

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

}  // namespace

void TempSearchConfig::validate() const {
  if (!(lower > 0.0 && lower < upper)) throw ValidationError("need 0 < lower < upper");
  if (lower < Temperature::kMin || upper > Temperature::kMax) {
    throw ValidationError("temperature search interval must lie within [0.01, 100]");
  }
  if (!(log_tolerance > 0.0)) throw ValidationError("log tolerance must be positive");
  if (grid_size < 3) throw ValidationError("temperature grid needs at least 3 points");
}

std::vector<double> TempSearchConfig::grid() const {
  std::vector<double> out(grid_size);
  const double lo = std::log(lower);
  const double step = (std::log(upper) - lo) / static_cast<double>(grid_size - 1);
  for (std::size_t g = 0; g < grid_size; ++g) {
    out[g] = std::clamp(std::exp(lo + step * static_cast<double>(g)), lower, upper);
  }
  out.front() = lower;
  out.back() = upper;
  return out;
}

// Everything a calibrated score depends on besides the pool itself.
struct ScoreKey {
  std::vector<std::size_t> members;
  std::vector<MetricId> metrics;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  PoolMode mode = PoolMode::kScaleThenPool;
  std::size_t bins = 0;
  double threshold = 0.0;

  friend auto operator<=>(const ScoreKey&, const ScoreKey&) = default;
};

struct MemberPool::Impl {
  std::vector<ShiftedLogits> members;
  LabelVector labels;
  TempSearchConfig search;
  std::vector<double> grid;

  // true_class[k][g * n + i]: softmax of member k at grid[g], true class of i.
  mutable std::vector<std::vector<double>> true_class;
  mutable std::unique_ptr<std::once_flag[]> once;

  std::size_t samples() const { return labels.size(); }
  std::size_t classes() const { return members.front().cols; }

  const std::vector<double>& grid_table(std::size_t k) const {
    std::call_once(once[k], [&] {
      const std::size_t n = samples();
      auto& table = true_class[k];
      table.assign(grid.size() * n, 0.0);
      const auto rows = detail::class_major(members[k], all_indices(n), labels.values());
      for (std::size_t g = 0; g < grid.size(); ++g) {
        detail::accumulate_true_class(rows, 1.0 / grid[g],
                                      std::span<double>(table).subspan(g * n, n));
      }
    });
    return true_class[k];
  }

  // Calibrated scores already computed on this pool. Results never depend on
  // the thread count, so a racing duplicate computation stores equal values.
  mutable std::mutex score_mutex;
  mutable std::map<ScoreKey, std::vector<CalibratedResult>> scores;
};

namespace {

std::unique_ptr<MemberPool::Impl> make_impl(const EvalDataset& dataset, TempSearchConfig search) {
  search.validate();
  auto impl = std::make_unique<MemberPool::Impl>();
  impl->labels = dataset.labels;
  impl->search = search;
  impl->grid = search.grid();
  for (std::size_t s = 0; s < dataset.members(); ++s) {
    impl->members.push_back(detail::shift_rows(dataset.logits.member(s)));
  }
  impl->true_class.resize(impl->members.size());
  impl->once = std::make_unique<std::once_flag[]>(impl->members.size());
  return impl;
}

}  // namespace

MemberPool::MemberPool(const EvalDataset& dataset, TempSearchConfig search)
    : impl_(make_impl(dataset, search)) {}

MemberPool::MemberPool(std::span<const EvalDataset> members, TempSearchConfig search)
    : impl_(make_impl(stack_members(members), search)) {}

MemberPool::MemberPool(MemberPool&&) noexcept = default;
MemberPool& MemberPool::operator=(MemberPool&&) noexcept = default;
MemberPool::~MemberPool() = default;

std::size_t MemberPool::size() const { return impl_->members.size(); }
std::size_t MemberPool::samples() const { return impl_->samples(); }
std::size_t MemberPool::classes() const { return impl_->classes(); }
const LabelVector& MemberPool::labels() const { return impl_->labels; }
const TempSearchConfig& MemberPool::search() const { return impl_->search; }

namespace {

// The pooled predictor for one member subset under one pool mode, with the
// log true-class probability of every sample at every grid temperature.
class SubsetModel {
 public:
  SubsetModel(const MemberPool::Impl& pool, std::span<const std::size_t> members, PoolMode mode)
      : pool_(pool) {
    if (members.empty()) throw ValidationError("member subset is empty");
    for (std::size_t k : members) {
      if (k >= pool.members.size()) throw ValidationError("member index out of range");
    }
    const std::size_t n = pool.samples();
    const std::size_t G = pool.grid.size();
    grid_log_.assign(G * n, 0.0);

    if (mode == PoolMode::kPoolThenScale && members.size() > 1) {
      std::vector<const ShiftedLogits*> ptrs;
      for (std::size_t k : members) ptrs.push_back(&pool.members[k]);
      virtual_member_ = detail::pooled_log_member(ptrs);
      effective_.push_back(&*virtual_member_);
      const auto rows = detail::class_major(*virtual_member_, all_indices(n), pool.labels.values());
      for (std::size_t g = 0; g < G; ++g) {
        auto slot = std::span<double>(grid_log_).subspan(g * n, n);
        detail::accumulate_true_class(rows, 1.0 / pool.grid[g], slot);
      }
    } else {
      for (std::size_t k : members) {
        effective_.push_back(&pool.members[k]);
        const auto& table = pool.grid_table(k);
        for (std::size_t j = 0; j < G * n; ++j) grid_log_[j] += table[j];
      }
    }
    const double count = static_cast<double>(effective_.size());
    for (double& v : grid_log_) v = std::log(std::max(v / count, detail::kProbFloor));
  }

  const MemberPool::Impl& pool() const { return pool_; }
  std::span<const ShiftedLogits* const> effective() const { return effective_; }

  double grid_objective(std::size_t g, std::span<const std::size_t> rows) const {
    const std::size_t n = pool_.samples();
    const double* table = grid_log_.data() + g * n;
    double sum = 0.0;
    for (std::size_t i : rows) sum += table[i];
    return sum / static_cast<double>(rows.size());
  }

 private:
  const MemberPool::Impl& pool_;
  std::optional<ShiftedLogits> virtual_member_;
  std::vector<const ShiftedLogits*> effective_;
  std::vector<double> grid_log_;
};

// The effective members restricted to the rows a temperature is fitted on.
struct FitRows {
  std::vector<detail::ClassMajorRows> members;
  std::size_t rows = 0;

  FitRows(const SubsetModel& model, std::span<const std::size_t> rows_in) : rows(rows_in.size()) {
    for (const auto* m : model.effective()) {
      members.push_back(detail::class_major(*m, rows_in, model.pool().labels.values()));
    }
  }

  double log_likelihood(double temperature) const {
    std::vector<double> acc(rows, 0.0);
    const double inv_t = 1.0 / temperature;
    for (const auto& m : members) detail::accumulate_true_class(m, inv_t, acc);
    const double count = static_cast<double>(members.size());
    double sum = 0.0;
    for (double p : acc) sum += std::log(std::max(p / count, detail::kProbFloor));
    return sum / static_cast<double>(rows);
  }
};

// The effective members restricted to the rows a fitted temperature is
// scored on.
struct EvalRows {
  std::vector<ShiftedLogits> members;
  std::vector<std::uint32_t> labels;

  EvalRows(const SubsetModel& model, std::span<const std::size_t> rows) {
    for (const auto* m : model.effective()) members.push_back(detail::gather_rows(*m, rows));
    labels.reserve(rows.size());
    for (std::size_t i : rows) labels.push_back(model.pool().labels[i]);
  }

  ProbMatrix probs(double temperature) const {
    std::vector<const ShiftedLogits*> ptrs;
    for (const auto& m : members) ptrs.push_back(&m);
    auto values = detail::pooled_probs(ptrs, 1.0 / temperature);
    return ProbMatrix::from_normalized(labels.size(), members.front().cols, std::move(values));
  }
};

TemperatureFit fit_rows(const SubsetModel& model, std::span<const std::size_t> rows) {
  const auto& cfg = model.pool().search;
  const auto& grid = model.pool().grid;
  const std::size_t G = grid.size();

  std::size_t best_g = 0;
  double best_ll = model.grid_objective(0, rows);
  for (std::size_t g = 1; g < G; ++g) {
    const double ll = model.grid_objective(g, rows);
    if (ll > best_ll) {
      best_ll = ll;
      best_g = g;
    }
  }
  if (best_g == 0 || best_g == G - 1) {
    return TemperatureFit{Temperature(grid[best_g]), best_ll, true};
  }

  const FitRows half(model, rows);
  auto objective = [&](double log_t) {
    return half.log_likelihood(std::clamp(std::exp(log_t), cfg.lower, cfg.upper));
  };

  // Golden-section maximisation in log T over the two grid cells around the
  // grid maximum.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(grid[best_g - 1]);
  double b = std::log(grid[best_g + 1]);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > cfg.log_tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }

  double best_t = grid[best_g];
  if (fc > best_ll) {
    best_ll = fc;
    best_t = std::clamp(std::exp(c), cfg.lower, cfg.upper);
  }
  if (fd > best_ll) {
    best_ll = fd;
    best_t = std::clamp(std::exp(d), cfg.lower, cfg.upper);
  }
  return TemperatureFit{Temperature(best_t), best_ll, false};
}

}  // namespace

TemperatureFit find_temperature(const MemberPool& pool, std::span<const std::size_t> members,
                                std::span<const std::size_t> rows, PoolMode mode) {
  if (rows.empty()) throw ValidationError("temperature search needs at least one sample");
  for (std::size_t i : rows) {
    if (i >= pool.samples()) throw ValidationError("sample index out of range");
  }
  const SubsetModel model(pool.impl(), members, mode);
  return fit_rows(model, rows);
}

TemperatureFit find_temperature(const EvalDataset& validation, PoolMode mode,
                                const TempSearchConfig& cfg) {
  const MemberPool pool(validation, cfg);
  const auto members = all_indices(pool.size());
  const auto rows = all_indices(pool.samples());
  return find_temperature(pool, members, rows, mode);
}

std::vector<HalfSplit> draw_splits(std::size_t samples, std::size_t repeats, std::uint64_t seed) {
  Rng rng(derive_seed(seed, streams::kSplits));
  const std::size_t first_size = (samples + 1) / 2;
  std::vector<HalfSplit> out;
  out.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    auto perm = rng.permutation(samples);
    HalfSplit split;
    split.first.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(first_size));
    split.second.assign(perm.begin() + static_cast<std::ptrdiff_t>(first_size), perm.end());
    std::sort(split.first.begin(), split.first.end());
    std::sort(split.second.begin(), split.second.end());
    out.push_back(std::move(split));
  }
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

std::vector<CalibratedResult> calibrated_metrics(const MemberPool& pool,
                                                 std::span<const std::size_t> members,
                                                 std::span<const MetricId> metrics,
                                                 const CrossValidationConfig& cfg) {
  const std::size_t n = pool.samples();
  if (n < 4) throw ValidationError("test-time cross-validation needs n >= 4, got " + std::to_string(n));
  if (cfg.repeats == 0) throw ValidationError("repeats must be >= 1");
  cfg.binning.validate();

  ScoreKey key{{members.begin(), members.end()}, {metrics.begin(), metrics.end()}, cfg.repeats,
               cfg.seed, cfg.mode, cfg.binning.bins, cfg.binning.threshold};
  const auto& impl = pool.impl();
  {
    std::lock_guard lock(impl.score_mutex);
    if (auto it = impl.scores.find(key); it != impl.scores.end()) return it->second;
  }

  const SubsetModel model(pool.impl(), members, cfg.mode);
  const auto splits = draw_splits(n, cfg.repeats, cfg.seed);
  const std::size_t tasks = 2 * cfg.repeats;

  std::vector<double> temperatures(tasks);
  std::vector<std::vector<double>> values(tasks);
  parallel_for(tasks, cfg.threads, [&](std::size_t t) {
    const auto& split = splits[t / 2];
    const auto& fit_half = t % 2 == 0 ? split.first : split.second;
    const auto& eval_half = t % 2 == 0 ? split.second : split.first;
    const auto fit = fit_rows(model, fit_half);
    temperatures[t] = fit.temperature.value();

    const EvalRows eval(model, eval_half);
    const auto probs = eval.probs(fit.temperature.value());
    const LabelVector labels(eval.labels, pool.classes());
    values[t].reserve(metrics.size());
    for (MetricId id : metrics) values[t].push_back(evaluate_metric(id, probs, labels, cfg.binning));
  });

  std::vector<CalibratedResult> out(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    auto& res = out[m];
    res.seed = cfg.seed;
    res.temperatures = temperatures;
    res.split_values.resize(tasks);
    for (std::size_t t = 0; t < tasks; ++t) res.split_values[t] = values[t][m];
    const auto stats = mean_std(res.split_values);
    res.mean = stats.mean;
    res.std = stats.std;
  }
  std::lock_guard lock(impl.score_mutex);
  impl.scores.emplace(std::move(key), out);
  return out;
}

std::vector<CalibratedResult> calibrated_metrics(const EvalDataset& test,
                                                 std::span<const MetricId> metrics,
                                                 const CrossValidationConfig& cfg) {
  const MemberPool pool(test);
  const auto members = all_indices(pool.size());
  return calibrated_metrics(pool, members, metrics, cfg);
}

CalibratedResult calibrated_metric(const EvalDataset& test, MetricId metric,
                                   const CrossValidationConfig& cfg) {
  const MetricId ids[] = {metric};
  return calibrated_metrics(test, ids, cfg).front();
}

}  // namespace uqeval
