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
#include <optional>
#include <vector>

#include "uqeval/tensor.hpp"

namespace uqeval {

// Synthetic model zoo: a ground-truth logit row per sample, labels drawn from
// its softmax (so the truth is calibrated by construction), and members that
// perturb the truth with partly shared noise before a temperature distortion.
struct ZooConfig {
  std::size_t samples = 10000;
  std::size_t classes = 10;
  std::size_t members = 4;
  double signal = 3.0;        // mu: logit boost of the initially drawn class
  double base_noise = 1.0;    // sigma_b: per-class noise of the true logits
  double member_noise = 1.0;  // sigma_m: member perturbation scale
  double correlation = 0.0;   // rho: share of perturbation variance common to all members
  double distortion = 1.0;    // a: member logits are scaled by a
  std::uint64_t seed = 0;
  // Seed for the member perturbations; defaults to `seed`. Zoos that share
  // `seed` share labels and true logits, whatever their member settings.
  std::optional<std::uint64_t> member_seed;

  void validate() const;
};

struct Zoo {
  std::vector<EvalDataset> pool;  // one single-member dataset per member
  LogitTensor true_logits;        // one member: the truth t
};

// Per sample i (stream derive_seed(seed, streams::kSynthBase)):
//   y ~ U{0..C-1}; t_i = mu * onehot(y) + sigma_b * g_i; label ~ softmax(t_i).
// Member s (shared e_i from derive_seed(member_seed, kSynthShared), e_is from
// derive_seed(derive_seed(member_seed, kSynthMember), s)):
//   z_is = a * (t_i + sigma_m * (sqrt(rho) e_i + sqrt(1 - rho) e_is)).
Zoo generate_zoo(const ZooConfig& cfg);

}  // namespace uqeval
