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

#include "uqeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uqeval/error.hpp"

namespace uqeval {

namespace {

void check_shapes(const ProbMatrix& probs, const LabelVector& labels) {
  if (probs.samples() != labels.size()) {
    throw ValidationError("probabilities have " + std::to_string(probs.samples()) +
                          " rows but there are " + std::to_string(labels.size()) +
                          " labels");
  }
  if (probs.samples() == 0) throw ValidationError("metric needs at least one sample");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= probs.classes()) throw ValidationError("label out of range");
  }
}

}  // namespace

void BinningConfig::validate() const {
  if (bins < 1) throw ValidationError("bin count must be >= 1");
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw ValidationError("TACE threshold must lie in [0, 1)");
  }
}

double log_likelihood(const ProbMatrix& probs, const LabelVector& labels) {
  check_shapes(probs, labels);
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sum += std::log(std::max(probs.at(i, labels[i]), kProbabilityFloor));
  }
  return std::min(sum / static_cast<double>(labels.size()), 0.0);
}

double brier_score(const ProbMatrix& probs, const LabelVector& labels) {
  check_shapes(probs, labels);
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = probs.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double target = c == labels[i] ? 1.0 : 0.0;
      const double diff = target - row[c];
      sum += diff * diff;
    }
  }
  return sum / static_cast<double>(labels.size()) / static_cast<double>(probs.classes());
}

double classification_error(const ProbMatrix& probs, const LabelVector& labels) {
  check_shapes(probs, labels);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predict(probs.row(i)).predicted != labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

double ece(const ProbMatrix& probs, const LabelVector& labels, const BinningConfig& cfg) {
  check_shapes(probs, labels);
  cfg.validate();
  const std::size_t M = cfg.bins;
  std::vector<std::size_t> count(M, 0);
  std::vector<double> correct(M, 0.0);
  std::vector<double> confidence(M, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto pred = predict(probs.row(i));
    const double scaled = std::ceil(pred.confidence * static_cast<double>(M));
    const auto bin = static_cast<std::size_t>(std::clamp(scaled, 1.0, static_cast<double>(M))) - 1;
    ++count[bin];
    confidence[bin] += pred.confidence;
    if (pred.predicted == labels[i]) correct[bin] += 1.0;
  }
  const double n = static_cast<double>(labels.size());
  double total = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    if (count[m] == 0) continue;
    const double size = static_cast<double>(count[m]);
    total += (size / n) * std::abs(correct[m] / size - confidence[m] / size);
  }
  return total;
}

double tace(const ProbMatrix& probs, const LabelVector& labels, const BinningConfig& cfg) {
  check_shapes(probs, labels);
  cfg.validate();
  const std::size_t n = labels.size();
  const std::size_t C = probs.classes();
  const std::size_t M = cfg.bins;
  const double nd = static_cast<double>(n);

  std::vector<std::size_t> kept;
  kept.reserve(n);
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    kept.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (probs.at(i, c) > cfg.threshold) kept.push_back(i);
    }
    if (kept.empty()) continue;
    std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
      return probs.at(a, c) < probs.at(b, c);
    });
    const std::size_t r = kept.size();
    const std::size_t base = r / M;
    const std::size_t extra = r % M;
    std::size_t pos = 0;
    for (std::size_t m = 0; m < M && pos < r; ++m) {
      const std::size_t size = base + (m < extra ? 1 : 0);
      if (size == 0) break;
      double hits = 0.0;
      double conf = 0.0;
      for (std::size_t k = pos; k < pos + size; ++k) {
        conf += probs.at(kept[k], c);
        if (labels[kept[k]] == c) hits += 1.0;
      }
      const double sz = static_cast<double>(size);
      total += (sz / nd) * std::abs(hits / sz - conf / sz);
      pos += size;
    }
  }
  return total / (static_cast<double>(C) * static_cast<double>(M));
}

DetectionAuc misclassification_auc(const ProbMatrix& probs, const LabelVector& labels,
                                   CertaintyScore score) {
  check_shapes(probs, labels);
  const std::size_t n = labels.size();
  // Higher value = more likely misclassified. -confidence ranks exactly like
  // 1 - confidence without the rounding of the subtraction.
  std::vector<double> uncertainty(n);
  std::vector<char> positive(n);
  const auto entropy =
      score == CertaintyScore::kNegativeEntropy ? predictive_entropy(probs) : std::vector<double>{};
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pred = predict(probs.row(i));
    positive[i] = pred.predicted != labels[i];
    positives += positive[i] ? 1 : 0;
    uncertainty[i] = score == CertaintyScore::kConfidence ? -pred.confidence : entropy[i];
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw ValidationError("degenerate detection problem: need both correct and incorrect predictions");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return uncertainty[a] < uncertainty[b]; });

  // Mann-Whitney with midranks for tied scores.
  double positive_rank_sum = 0.0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && uncertainty[order[end]] == uncertainty[order[start]]) ++end;
    const double midrank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      if (positive[order[k]]) positive_rank_sum += midrank;
    }
    start = end;
  }
  const double P = static_cast<double>(positives);
  const double N = static_cast<double>(negatives);
  DetectionAuc out;
  out.roc = (positive_rank_sum - P * (P + 1.0) / 2.0) / (P * N);

  // Precision-recall, thresholds from most to least uncertain.
  double tp = 0.0;
  double fp = 0.0;
  double prev_recall = 0.0;
  double area = 0.0;
  for (std::size_t end = n; end > 0;) {
    std::size_t start = end - 1;
    while (start > 0 && uncertainty[order[start - 1]] == uncertainty[order[end - 1]]) --start;
    for (std::size_t k = start; k < end; ++k) {
      if (positive[order[k]]) tp += 1.0; else fp += 1.0;
    }
    const double recall = tp / P;
    area += (tp / (tp + fp)) * (recall - prev_recall);
    prev_recall = recall;
    end = start;
  }
  out.pr = area;
  return out;
}

RejectionCurve accuracy_rejection(const ProbMatrix& probs, const LabelVector& labels) {
  check_shapes(probs, labels);
  const std::size_t n = labels.size();
  std::vector<double> conf(n);
  std::vector<char> correct(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pred = predict(probs.row(i));
    conf[i] = pred.confidence;
    correct[i] = pred.predicted == labels[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (conf[a] != conf[b]) return conf[a] > conf[b];
    return !correct[a] && correct[b];
  });
  // kept_correct[m] = correct among the m most confident samples.
  std::vector<std::size_t> kept_correct(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) kept_correct[k + 1] = kept_correct[k] + (correct[order[k]] ? 1 : 0);

  RejectionCurve out;
  out.curve.reserve(n + 1);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t kept = n - j;
    out.curve.push_back({static_cast<double>(j) / nd,
                         static_cast<double>(kept_correct[kept]) / static_cast<double>(kept)});
  }
  out.curve.push_back({1.0, 1.0});
  double area = 0.0;
  for (std::size_t j = 0; j + 1 < out.curve.size(); ++j) {
    area += (out.curve[j].accuracy + out.curve[j + 1].accuracy) / (2.0 * nd);
  }
  out.au_arc = area;
  return out;
}

std::string_view to_string(MetricId id) {
  switch (id) {
    case MetricId::kLogLikelihood: return "ll";
    case MetricId::kBrier: return "brier";
    case MetricId::kError: return "error";
    case MetricId::kEce: return "ece";
    case MetricId::kTace: return "tace";
  }
  return "unknown";
}

MetricId parse_metric_id(std::string_view text) {
  for (auto id : {MetricId::kLogLikelihood, MetricId::kBrier, MetricId::kError, MetricId::kEce,
                  MetricId::kTace}) {
    if (text == to_string(id)) return id;
  }
  throw ValidationError("unknown metric '" + std::string(text) +
                        "' (expected ll, brier, error, ece or tace)");
}

bool higher_is_better(MetricId id) { return id == MetricId::kLogLikelihood; }

double evaluate_metric(MetricId id, const ProbMatrix& probs, const LabelVector& labels,
                       const BinningConfig& cfg) {
  switch (id) {
    case MetricId::kLogLikelihood: return log_likelihood(probs, labels);
    case MetricId::kBrier: return brier_score(probs, labels);
    case MetricId::kError: return classification_error(probs, labels);
    case MetricId::kEce: return ece(probs, labels, cfg);
    case MetricId::kTace: return tace(probs, labels, cfg);
  }
  throw ValidationError("unknown metric id");
}

}  // namespace uqeval
