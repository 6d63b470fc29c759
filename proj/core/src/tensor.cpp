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

#include "uqeval/tensor.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "uqeval/error.hpp"

namespace uqeval {

LogitTensor::LogitTensor(std::size_t members, std::size_t samples,
                         std::size_t classes, std::vector<float> values)
    : members_(members),
      samples_(samples),
      classes_(classes),
      values_(std::move(values)) {
  if (members_ < 1) throw ValidationError("logit tensor needs at least one member");
  if (samples_ < 1) throw ValidationError("logit tensor needs at least one sample");
  if (classes_ < 2) throw ValidationError("logit tensor needs at least two classes");
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  if (samples_ > max / classes_ || members_ > max / (samples_ * classes_)) {
    throw ValidationError("logit tensor shape overflows");
  }
  if (values_.size() != members_ * samples_ * classes_) {
    throw ValidationError("logit buffer holds " + std::to_string(values_.size()) +
                          " values, shape needs " +
                          std::to_string(members_ * samples_ * classes_));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw ValidationError("non-finite logit at flat index " + std::to_string(k));
    }
  }
}

MemberView LogitTensor::member(std::size_t s) const {
  if (s >= members_) throw ValidationError("member index out of range");
  const std::size_t block = samples_ * classes_;
  return MemberView{std::span<const float>(values_).subspan(s * block, block),
                    samples_, classes_};
}

LogitTensor LogitTensor::select_members(std::span<const std::size_t> members) const {
  const std::size_t block = samples_ * classes_;
  std::vector<float> out;
  out.reserve(members.size() * block);
  for (std::size_t s : members) {
    auto view = member(s).values;
    out.insert(out.end(), view.begin(), view.end());
  }
  return LogitTensor(members.size(), samples_, classes_, std::move(out));
}

LabelVector::LabelVector(std::vector<std::uint32_t> labels, std::size_t classes)
    : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= classes) {
      throw ValidationError("label out of range: sample " + std::to_string(i) +
                            " has label " + std::to_string(labels_[i]) +
                            " with " + std::to_string(classes) + " classes");
    }
  }
}

EvalDataset::EvalDataset(LogitTensor logits_in, LabelVector labels_in)
    : logits(std::move(logits_in)), labels(std::move(labels_in)) {
  if (labels.size() != logits.samples()) {
    throw ValidationError("label count " + std::to_string(labels.size()) +
                          " does not match sample count " +
                          std::to_string(logits.samples()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= logits.classes()) {
      throw ValidationError("label out of range at sample " + std::to_string(i));
    }
  }
}

std::vector<EvalDataset> EvalDataset::split_members() const {
  std::vector<EvalDataset> out;
  out.reserve(members());
  for (std::size_t s = 0; s < members(); ++s) {
    const std::size_t idx[] = {s};
    out.emplace_back(logits.select_members(idx), labels);
  }
  return out;
}

EvalDataset stack_members(std::span<const EvalDataset> parts) {
  if (parts.empty()) throw ValidationError("cannot stack an empty member list");
  const auto& first = parts.front();
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.samples() != first.samples() || p.classes() != first.classes()) {
      throw ValidationError("member shapes disagree: " + std::to_string(p.samples()) +
                            "x" + std::to_string(p.classes()) + " vs " +
                            std::to_string(first.samples()) + "x" +
                            std::to_string(first.classes()));
    }
    if (!(p.labels == first.labels)) {
      throw ValidationError("member label vectors disagree");
    }
    total += p.members();
  }
  std::vector<float> values;
  values.reserve(total * first.samples() * first.classes());
  for (const auto& p : parts) {
    auto v = p.logits.values();
    values.insert(values.end(), v.begin(), v.end());
  }
  return EvalDataset(LogitTensor(total, first.samples(), first.classes(), std::move(values)),
                     first.labels);
}

}  // namespace uqeval
