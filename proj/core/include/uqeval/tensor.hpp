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

namespace uqeval {

// One ensemble member's n x C block of raw logits, row-major.
struct MemberView {
  std::span<const float> values;
  std::size_t samples = 0;
  std::size_t classes = 0;

  std::span<const float> row(std::size_t i) const {
    return values.subspan(i * classes, classes);
  }
};

// S members x n samples x C classes of raw logits, member-major then
// sample-major then class-major. Values are stored as 32-bit floats exactly
// as they appear on disk; every computation upcasts to double.
class LogitTensor {
 public:
  LogitTensor() = default;

  // Throws ValidationError unless S >= 1, n >= 1, C >= 2, the buffer holds
  // exactly S*n*C values and every value is finite.
  LogitTensor(std::size_t members, std::size_t samples, std::size_t classes,
              std::vector<float> values);

  std::size_t members() const noexcept { return members_; }
  std::size_t samples() const noexcept { return samples_; }
  std::size_t classes() const noexcept { return classes_; }
  std::span<const float> values() const noexcept { return values_; }

  MemberView member(std::size_t s) const;
  float at(std::size_t s, std::size_t i, std::size_t c) const {
    return values_[(s * samples_ + i) * classes_ + c];
  }

  // New tensor holding only the listed members, in the listed order.
  LogitTensor select_members(std::span<const std::size_t> members) const;

  friend bool operator==(const LogitTensor&, const LogitTensor&) = default;

 private:
  std::size_t members_ = 0;
  std::size_t samples_ = 0;
  std::size_t classes_ = 0;
  std::vector<float> values_;
};

// n ground-truth class indices.
class LabelVector {
 public:
  LabelVector() = default;
  // Throws ValidationError if any label is >= classes.
  LabelVector(std::vector<std::uint32_t> labels, std::size_t classes);

  std::size_t size() const noexcept { return labels_.size(); }
  std::uint32_t operator[](std::size_t i) const { return labels_[i]; }
  std::span<const std::uint32_t> values() const noexcept { return labels_; }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<std::uint32_t> labels_;
};

struct EvalDataset {
  LogitTensor logits;
  LabelVector labels;

  // Throws ValidationError if the label and logit sample counts differ or
  // a label is out of range.
  EvalDataset(LogitTensor logits, LabelVector labels);

  std::size_t members() const noexcept { return logits.members(); }
  std::size_t samples() const noexcept { return logits.samples(); }
  std::size_t classes() const noexcept { return logits.classes(); }

  // Split into S single-member datasets sharing this dataset's labels.
  std::vector<EvalDataset> split_members() const;

  friend bool operator==(const EvalDataset&, const EvalDataset&) = default;
};

// Stack single- or multi-member datasets into one ensemble along the member
// axis. All inputs must share n, C and labels.
EvalDataset stack_members(std::span<const EvalDataset> parts);

}  // namespace uqeval
