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
#include <string_view>
#include <vector>

#include "uqeval/prob_ops.hpp"
#include "uqeval/tensor.hpp"

namespace uqeval {

// Probabilities are clamped to this floor before taking logarithms.
inline constexpr double kProbabilityFloor = 1e-300;

// Attached to every misclassification-detection AUC: each model induces its
// own binary problem (which samples it gets wrong), so the numbers only
// compare rejection quality within one model.
inline constexpr std::string_view kAucCaveat =
    "misclassification-detection AUCs cannot be directly compared between "
    "different models: each model induces its own binary detection problem";

// ECE reaches 0 for a constant uniform predictor on balanced data, so it
// cannot be minimized as an objective.
inline constexpr std::string_view kEceCaveat =
    "ECE is minimized by constant uniform predictions (infinite temperature); "
    "it is a biased estimate and not comparable across models";

inline constexpr std::string_view kTaceCaveat =
    "TACE depends strongly on the bin count and threshold; rankings of models "
    "may change with both";

struct BinningConfig {
  std::size_t bins = 15;     // M, for ECE and TACE
  double threshold = 1e-3;   // TACE only; entries <= threshold are dropped

  // Throws ValidationError unless bins >= 1 and threshold in [0, 1).
  void validate() const;
};

struct CurvePoint {
  double rejection_rate = 0.0;
  double accuracy = 0.0;
};
using CurvePoints = std::vector<CurvePoint>;

struct RejectionCurve {
  CurvePoints curve;
  double au_arc = 0.0;
};

// Score used to rank samples by certainty in misclassification detection.
// Detection treats misclassified samples as positives and ranks them by the
// corresponding uncertainty: 1 - confidence, or predictive entropy.
enum class CertaintyScore { kConfidence, kNegativeEntropy };

struct DetectionAuc {
  double roc = 0.0;
  double pr = 0.0;
};

// Mean log-probability of the true label; always <= 0.
double log_likelihood(const ProbMatrix& probs, const LabelVector& labels);

// (1/n)(1/C) sum_i sum_c (1[y_i = c] - p_ic)^2, in [0, 2/C].
double brier_score(const ProbMatrix& probs, const LabelVector& labels);

// Fraction of samples whose argmax (lowest-index tie-break) misses the label.
double classification_error(const ProbMatrix& probs, const LabelVector& labels);

// Expected calibration error over M equal-width confidence bins. Confidence c
// falls in bin ceil(c M), with c = 0 in the first bin.
double ece(const ProbMatrix& probs, const LabelVector& labels, const BinningConfig& cfg);

// Thresholded adaptive calibration error. Per class: entries above the
// threshold, sorted ascending (ties by sample index), cut into M bins whose
// sizes differ by at most one with the larger bins first. Bin weights divide
// by the total sample count n.
double tace(const ProbMatrix& probs, const LabelVector& labels, const BinningConfig& cfg);

// AUC-ROC by the rank statistic (ties count 1/2) and AUC-PR by the step rule
// over distinct thresholds. Throws ValidationError when every prediction is
// correct or every prediction is wrong.
DetectionAuc misclassification_auc(const ProbMatrix& probs, const LabelVector& labels,
                                   CertaintyScore score);

// Accuracy after rejecting the j least-confident samples, j = 0..n-1, plus the
// r = 1 point at accuracy 1. Equal confidences order incorrect samples ahead
// of correct ones, so correct samples are rejected first.
RejectionCurve accuracy_rejection(const ProbMatrix& probs, const LabelVector& labels);

// Metrics that have a temperature-calibrated variant.
enum class MetricId { kLogLikelihood, kBrier, kError, kEce, kTace };

std::string_view to_string(MetricId id);
MetricId parse_metric_id(std::string_view text);
bool higher_is_better(MetricId id);
double evaluate_metric(MetricId id, const ProbMatrix& probs, const LabelVector& labels,
                       const BinningConfig& cfg);

}  // namespace uqeval
