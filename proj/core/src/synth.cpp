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

#include "uqeval/synth.hpp"

#include <algorithm>
#include <cmath>

#include "uqeval/error.hpp"
#include "uqeval/rng.hpp"

namespace uqeval {

void ZooConfig::validate() const {
  if (samples < 1) throw ValidationError("zoo needs n >= 1");
  if (classes < 2) throw ValidationError("zoo needs C >= 2");
  if (members < 1) throw ValidationError("zoo needs S >= 1");
  if (!(signal > 0.0) || !std::isfinite(signal)) throw ValidationError("signal strength must be > 0");
  if (!(base_noise >= 0.0) || !std::isfinite(base_noise)) throw ValidationError("base noise must be >= 0");
  if (!(member_noise >= 0.0) || !std::isfinite(member_noise)) throw ValidationError("member noise must be >= 0");
  if (!(correlation >= 0.0 && correlation <= 1.0)) throw ValidationError("correlation must lie in [0, 1]");
  if (!(distortion > 0.0) || !std::isfinite(distortion)) throw ValidationError("distortion must be > 0");
}

Zoo generate_zoo(const ZooConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.samples;
  const std::size_t C = cfg.classes;

  Rng base(derive_seed(cfg.seed, streams::kSynthBase));
  std::vector<double> truth(n * C);
  std::vector<std::uint32_t> labels(n);
  std::vector<double> weights(C);
  for (std::size_t i = 0; i < n; ++i) {
    const auto initial = base.uniform_index(C);
    double* t = truth.data() + i * C;
    for (std::size_t c = 0; c < C; ++c) {
      t[c] = (c == initial ? cfg.signal : 0.0) + cfg.base_noise * base.normal();
    }
    // Redraw the label from softmax(t) by inverting the cumulative weights.
    const double m = *std::max_element(t, t + C);
    double total = 0.0;
    for (std::size_t c = 0; c < C; ++c) total += (weights[c] = std::exp(t[c] - m));
    const double u = base.uniform01() * total;
    std::uint32_t label = static_cast<std::uint32_t>(C - 1);
    double cumulative = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      cumulative += weights[c];
      if (u < cumulative) {
        label = static_cast<std::uint32_t>(c);
        break;
      }
    }
    labels[i] = label;
  }
  LabelVector label_vec(std::move(labels), C);

  const std::uint64_t member_seed = cfg.member_seed.value_or(cfg.seed);
  Rng shared_rng(derive_seed(member_seed, streams::kSynthShared));
  std::vector<double> shared(n * C);
  for (double& e : shared) e = shared_rng.normal();

  const double w_shared = std::sqrt(cfg.correlation);
  const double w_own = std::sqrt(1.0 - cfg.correlation);
  const std::uint64_t member_root = derive_seed(member_seed, streams::kSynthMember);

  Zoo zoo;
  zoo.pool.reserve(cfg.members);
  for (std::size_t s = 0; s < cfg.members; ++s) {
    Rng own(derive_seed(member_root, s));
    std::vector<float> values(n * C);
    for (std::size_t j = 0; j < n * C; ++j) {
      const double noise = w_shared * shared[j] + w_own * own.normal();
      values[j] = static_cast<float>(cfg.distortion * (truth[j] + cfg.member_noise * noise));
    }
    zoo.pool.emplace_back(LogitTensor(1, n, C, std::move(values)), label_vec);
  }
  std::vector<float> truth_f(truth.begin(), truth.end());
  zoo.true_logits = LogitTensor(1, n, C, std::move(truth_f));
  return zoo;
}

}  // namespace uqeval
