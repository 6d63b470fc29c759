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

// Naive metric references for tests. Deliberately quadratic and written
// without any shared code from the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "uqeval/prob_ops.hpp"
#include "uqeval/tensor.hpp"

namespace uqeval::oracle {

struct Row {
  double conf;
  std::size_t pred;
  bool correct;
};

inline std::vector<Row> naive_rows(const ProbMatrix& p, const LabelVector& y) {
  std::vector<Row> out;
  for (std::size_t i = 0; i < p.samples(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.classes(); ++c) {
      if (p.at(i, c) > p.at(i, best)) best = c;
    }
    out.push_back({p.at(i, best), best, best == y[i]});
  }
  return out;
}

inline double naive_ece(const ProbMatrix& p, const LabelVector& y, std::size_t bins) {
  const auto rows = naive_rows(p, y);
  double total = 0.0;
  for (std::size_t b = 1; b <= bins; ++b) {
    double count = 0, hits = 0, conf = 0;
    for (const auto& r : rows) {
      auto bin = static_cast<std::size_t>(std::ceil(r.conf * static_cast<double>(bins)));
      bin = std::clamp<std::size_t>(bin, 1, bins);
      if (bin != b) continue;
      count += 1;
      hits += r.correct;
      conf += r.conf;
    }
    if (count > 0) total += count / static_cast<double>(rows.size()) * std::fabs(hits / count - conf / count);
  }
  return total;
}

inline double naive_tace(const ProbMatrix& p, const LabelVector& y, std::size_t bins, double threshold) {
  const std::size_t n = p.samples();
  const std::size_t C = p.classes();
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<std::pair<double, std::size_t>> kept;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.at(i, c) > threshold) kept.push_back({p.at(i, c), i});
    }
    std::sort(kept.begin(), kept.end());  // by probability, then sample index
    std::vector<std::size_t> sizes(bins, kept.size() / bins);
    for (std::size_t m = 0; m < kept.size() % bins; ++m) ++sizes[m];
    std::size_t pos = 0;
    for (std::size_t m = 0; m < bins; ++m) {
      if (sizes[m] == 0) continue;
      double hits = 0, conf = 0;
      for (std::size_t k = pos; k < pos + sizes[m]; ++k) {
        conf += kept[k].first;
        hits += y[kept[k].second] == c ? 1.0 : 0.0;
      }
      const double sz = static_cast<double>(sizes[m]);
      total += sz / static_cast<double>(n) * std::fabs(hits / sz - conf / sz);
      pos += sizes[m];
    }
  }
  return total / static_cast<double>(C * bins);
}

// Pairwise: a misclassified sample "wins" when it is less certain.
inline double naive_auc_roc(const std::vector<double>& certainty, const std::vector<bool>& wrong) {
  double wins = 0, pairs = 0;
  for (std::size_t a = 0; a < wrong.size(); ++a) {
    if (!wrong[a]) continue;
    for (std::size_t b = 0; b < wrong.size(); ++b) {
      if (wrong[b]) continue;
      pairs += 1;
      if (certainty[a] < certainty[b]) wins += 1;
      else if (certainty[a] == certainty[b]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// Average precision: every distinct certainty value is a threshold; samples
// at or below it are flagged.
inline double naive_auc_pr(const std::vector<double>& certainty, const std::vector<bool>& wrong) {
  std::vector<double> thresholds = certainty;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  const double P = static_cast<double>(std::count(wrong.begin(), wrong.end(), true));
  double prev_recall = 0, area = 0;
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < wrong.size(); ++i) {
      if (certainty[i] <= t) (wrong[i] ? tp : fp) += 1;
    }
    area += tp / (tp + fp) * (tp / P - prev_recall);
    prev_recall = tp / P;
  }
  return area;
}

// Samples sorted by hand into rejection order (least confident first;
// among equal confidences the correct ones go first).
inline double naive_au_arc(const ProbMatrix& p, const LabelVector& y, std::vector<double>* curve) {
  auto rows = naive_rows(p, y);
  std::vector<Row> order;
  std::vector<bool> used(rows.size(), false);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::size_t pick = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (used[i]) continue;
      if (pick == rows.size() || rows[i].conf < rows[pick].conf ||
          (rows[i].conf == rows[pick].conf && rows[i].correct && !rows[pick].correct)) {
        pick = i;
      }
    }
    used[pick] = true;
    order.push_back(rows[pick]);
  }
  const double n = static_cast<double>(rows.size());
  std::vector<double> acc;
  for (std::size_t j = 0; j < order.size(); ++j) {
    double hits = 0;
    for (std::size_t k = j; k < order.size(); ++k) hits += order[k].correct;
    acc.push_back(hits / (n - static_cast<double>(j)));
  }
  acc.push_back(1.0);
  if (curve) *curve = acc;
  double area = 0;
  for (std::size_t j = 0; j + 1 < acc.size(); ++j) area += 0.5 * (acc[j] + acc[j + 1]) / n;
  return area;
}

}  // namespace uqeval::oracle
