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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "uqeval/prob_ops.hpp"
#include "uqeval/tensor.hpp"

namespace uqeval::testing {

inline EvalDataset make_dataset(std::size_t members, std::size_t samples, std::size_t classes,
                                std::vector<float> logits, std::vector<std::uint32_t> labels) {
  return EvalDataset(LogitTensor(members, samples, classes, std::move(logits)),
                     LabelVector(std::move(labels), classes));
}

inline ProbMatrix prob_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return ProbMatrix(rows.size(), rows.front().size(), std::move(flat));
}

inline LabelVector labels_of(std::vector<std::uint32_t> labels, std::size_t classes) {
  return LabelVector(std::move(labels), classes);
}

// Random logits in [-scale, scale] and uniform labels.
inline EvalDataset random_dataset(std::mt19937_64& gen, std::size_t members, std::size_t samples,
                                  std::size_t classes, double scale = 4.0) {
  std::uniform_real_distribution<double> logit(-scale, scale);
  std::uniform_int_distribution<std::uint32_t> label(0, static_cast<std::uint32_t>(classes - 1));
  std::vector<float> z(members * samples * classes);
  for (auto& v : z) v = static_cast<float>(logit(gen));
  std::vector<std::uint32_t> y(samples);
  for (auto& v : y) v = label(gen);
  return make_dataset(members, samples, classes, std::move(z), std::move(y));
}

// Random probability rows; `ties` rounds entries so equal confidences occur.
inline ProbMatrix random_probs(std::mt19937_64& gen, std::size_t samples, std::size_t classes,
                               bool ties = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(samples * classes);
  for (std::size_t i = 0; i < samples; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      double w = u(gen);
      if (ties) w = std::round(w * 4.0) + 0.5;
      values[i * classes + c] = w;
      sum += w;
    }
    for (std::size_t c = 0; c < classes; ++c) values[i * classes + c] /= sum;
  }
  return ProbMatrix(samples, classes, std::move(values));
}

inline LabelVector random_labels(std::mt19937_64& gen, std::size_t samples, std::size_t classes) {
  std::uniform_int_distribution<std::uint32_t> label(0, static_cast<std::uint32_t>(classes - 1));
  std::vector<std::uint32_t> y(samples);
  for (auto& v : y) v = label(gen);
  return LabelVector(std::move(y), classes);
}

// Directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("uqeval_" + tag + "_" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace uqeval::testing
