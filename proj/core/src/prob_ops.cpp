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

#include "uqeval/prob_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/exp_kernel.hpp"
#include "detail/softmax.hpp"
#include "uqeval/error.hpp"

namespace uqeval {

std::string_view to_string(PoolMode mode) {
  return mode == PoolMode::kScaleThenPool ? "scale-then-pool" : "pool-then-scale";
}

PoolMode parse_pool_mode(std::string_view text) {
  if (text == "scale-then-pool") return PoolMode::kScaleThenPool;
  if (text == "pool-then-scale") return PoolMode::kPoolThenScale;
  throw ValidationError("unknown pool mode '" + std::string(text) +
                        "' (expected scale-then-pool or pool-then-scale)");
}

Temperature::Temperature(double value) : value_(value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError("temperature must be positive and finite, got " +
                          std::to_string(value));
  }
  if (value < kMin || value > kMax) {
    throw ValidationError("temperature " + std::to_string(value) +
                          " outside [0.01, 100]");
  }
}

ProbMatrix::ProbMatrix(std::size_t samples, std::size_t classes, std::vector<double> values)
    : samples_(samples), classes_(classes), values_(std::move(values)) {
  if (classes_ < 2) throw ValidationError("probability matrix needs at least two classes");
  if (values_.size() != samples_ * classes_) {
    throw ValidationError("probability buffer size does not match shape");
  }
  for (std::size_t i = 0; i < samples_; ++i) {
    double sum = 0.0;
    for (double p : row(i)) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("probability outside [0, 1] in row " + std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
}

ProbMatrix ProbMatrix::from_normalized(std::size_t samples, std::size_t classes,
                                       std::vector<double> values) {
  ProbMatrix m;
  m.samples_ = samples;
  m.classes_ = classes;
  m.values_ = std::move(values);
  return m;
}

ProbMatrix ProbMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> out;
  out.reserve(rows.size() * classes_);
  for (std::size_t i : rows) {
    auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return from_normalized(rows.size(), classes_, std::move(out));
}

namespace detail {

namespace {
constexpr std::size_t kBlockRows = 256;
}

ShiftedLogits shift_rows(const MemberView& member) {
  ShiftedLogits out{member.samples, member.classes, {}};
  out.values.resize(member.samples * member.classes);
  for (std::size_t i = 0; i < member.samples; ++i) {
    const auto r = member.row(i);
    const double m = *std::max_element(r.begin(), r.end());
    for (std::size_t c = 0; c < member.classes; ++c) {
      out.values[i * member.classes + c] = static_cast<double>(r[c]) - m;
    }
  }
  return out;
}

ShiftedLogits shift_rows(std::span<const double> logits, std::size_t rows, std::size_t cols) {
  ShiftedLogits out{rows, cols, {}};
  out.values.resize(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = logits.data() + i * cols;
    const double m = *std::max_element(r, r + cols);
    for (std::size_t c = 0; c < cols; ++c) out.values[i * cols + c] = r[c] - m;
  }
  return out;
}

ShiftedLogits gather_rows(const ShiftedLogits& src, std::span<const std::size_t> rows) {
  ShiftedLogits out{rows.size(), src.cols, {}};
  out.values.resize(rows.size() * src.cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::copy_n(src.row(rows[k]), src.cols, out.values.data() + k * src.cols);
  }
  return out;
}

namespace {

// Fills scratch.exps with exp(member * inv_t) for rows [begin, end) and
// scratch.sums with their row sums.
void block_exps(const ShiftedLogits& member, double inv_t, std::size_t begin,
                std::size_t end, SoftmaxScratch& scratch) {
  const std::size_t C = member.cols;
  const std::size_t count = (end - begin) * C;
  if (scratch.exps.size() < count) scratch.exps.resize(count);
  if (scratch.sums.size() < end - begin) scratch.sums.resize(end - begin);
  scaled_exp(member.row(begin), inv_t, scratch.exps.data(), count);
  for (std::size_t r = 0; r < end - begin; ++r) {
    const double* e = scratch.exps.data() + r * C;
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) s += e[c];
    scratch.sums[r] = s;
  }
}

}  // namespace

ClassMajorRows class_major(const ShiftedLogits& src, std::span<const std::size_t> rows,
                           std::span<const std::uint32_t> labels) {
  const std::size_t C = src.cols;
  const std::size_t blocks = (rows.size() + kLaneRows - 1) / kLaneRows;
  ClassMajorRows out;
  out.rows = rows.size();
  out.cols = C;
  out.values.assign(blocks * C * kLaneRows, 0.0);
  out.labels.assign(blocks * kLaneRows, 0);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const std::size_t b = j / kLaneRows;
    const std::size_t r = j % kLaneRows;
    const double* src_row = src.row(rows[j]);
    double* dst = out.values.data() + b * C * kLaneRows + r;
    for (std::size_t c = 0; c < C; ++c) dst[c * kLaneRows] = src_row[c];
    out.labels[j] = labels[rows[j]];
  }
  return out;
}

void accumulate_true_class(const ClassMajorRows& member, double inv_t, std::span<double> acc) {
  const std::size_t C = member.cols;
  double sums[kLaneRows];
  double trues[kLaneRows];
  for (std::size_t begin = 0; begin < member.rows; begin += kLaneRows) {
    const std::size_t b = begin / kLaneRows;
    softmax_true_block(member.values.data() + b * C * kLaneRows,
                       member.labels.data() + b * kLaneRows, inv_t, C, sums, trues);
    const std::size_t count = std::min(kLaneRows, member.rows - begin);
    for (std::size_t r = 0; r < count; ++r) acc[begin + r] += trues[r] / sums[r];
  }
}

void accumulate_probs(const ShiftedLogits& member, double inv_t, std::span<double> acc,
                      SoftmaxScratch& scratch) {
  const std::size_t C = member.cols;
  for (std::size_t begin = 0; begin < member.rows; begin += kBlockRows) {
    const std::size_t end = std::min(member.rows, begin + kBlockRows);
    block_exps(member, inv_t, begin, end, scratch);
    for (std::size_t r = 0; r < end - begin; ++r) {
      const double s = scratch.sums[r];
      const double* e = scratch.exps.data() + r * C;
      double* a = acc.data() + (begin + r) * C;
      for (std::size_t c = 0; c < C; ++c) a[c] += e[c] / s;
    }
  }
}

std::vector<double> pooled_probs(std::span<const ShiftedLogits* const> members, double inv_t) {
  const auto& first = *members.front();
  std::vector<double> acc(first.rows * first.cols, 0.0);
  SoftmaxScratch scratch;
  for (const auto* m : members) accumulate_probs(*m, inv_t, acc, scratch);
  const double count = static_cast<double>(members.size());
  for (double& v : acc) v /= count;
  return acc;
}

ShiftedLogits pooled_log_member(std::span<const ShiftedLogits* const> members) {
  auto probs = pooled_probs(members, 1.0);
  for (double& p : probs) p = std::log(std::max(p, kProbFloor));
  const auto& first = *members.front();
  return shift_rows(probs, first.rows, first.cols);
}

}  // namespace detail

Matrix log_softmax_temp(const MemberView& logits, Temperature temperature) {
  const auto shifted = detail::shift_rows(logits);
  const std::size_t n = shifted.rows;
  const std::size_t C = shifted.cols;
  const double inv_t = temperature.inverse();
  Matrix out{n, C, std::vector<double>(n * C)};
  std::vector<double> exps(C);
  for (std::size_t i = 0; i < n; ++i) {
    const double* d = shifted.row(i);
    detail::scaled_exp(d, inv_t, exps.data(), C);
    double s = 0.0;
    for (double e : exps) s += e;
    const double log_s = std::log(s);
    for (std::size_t c = 0; c < C; ++c) out.values[i * C + c] = d[c] * inv_t - log_s;
  }
  return out;
}

ProbMatrix pool_members(const LogitTensor& logits, Temperature temperature, PoolMode mode) {
  std::vector<detail::ShiftedLogits> shifted;
  shifted.reserve(logits.members());
  for (std::size_t s = 0; s < logits.members(); ++s) {
    shifted.push_back(detail::shift_rows(logits.member(s)));
  }
  std::vector<const detail::ShiftedLogits*> ptrs;
  for (const auto& m : shifted) ptrs.push_back(&m);

  std::vector<double> probs;
  if (mode == PoolMode::kPoolThenScale && ptrs.size() > 1) {
    const auto virtual_member = detail::pooled_log_member(ptrs);
    const detail::ShiftedLogits* one[] = {&virtual_member};
    probs = detail::pooled_probs(one, temperature.inverse());
  } else {
    probs = detail::pooled_probs(ptrs, temperature.inverse());
  }
  return ProbMatrix::from_normalized(logits.samples(), logits.classes(), std::move(probs));
}

std::vector<double> predictive_entropy(const ProbMatrix& probs) {
  std::vector<double> out(probs.samples());
  for (std::size_t i = 0; i < probs.samples(); ++i) {
    double h = 0.0;
    for (double p : probs.row(i)) {
      if (p > 0.0) h -= p * std::log(p);
    }
    out[i] = std::max(h, 0.0);
  }
  return out;
}

Prediction predict(std::span<const double> row) {
  Prediction best{row[0], 0};
  for (std::size_t c = 1; c < row.size(); ++c) {
    if (row[c] > best.confidence) best = {row[c], static_cast<std::uint32_t>(c)};
  }
  return best;
}

std::vector<Prediction> confidence_argmax(const ProbMatrix& probs) {
  std::vector<Prediction> out(probs.samples());
  for (std::size_t i = 0; i < probs.samples(); ++i) out[i] = predict(probs.row(i));
  return out;
}

}  // namespace uqeval
