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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "uqeval/metrics.hpp"
#include "uqeval/prob_ops.hpp"
#include "uqeval/synth.hpp"

namespace {

using namespace uqeval;

EvalDataset zoo(std::size_t n, std::size_t members) {
  ZooConfig cfg;
  cfg.samples = n;
  cfg.members = members;
  return stack_members(generate_zoo(cfg).pool);
}

void BM_PoolMembers(benchmark::State& state) {
  const auto d = zoo(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto mode = state.range(2) ? PoolMode::kPoolThenScale : PoolMode::kScaleThenPool;
  for (auto _ : state) benchmark::DoNotOptimize(pool_members(d.logits, Temperature(1.7), mode));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.logits.values().size()));
}
BENCHMARK(BM_PoolMembers)->Args({10000, 1, 0})->Args({10000, 8, 0})->Args({10000, 8, 1});

void BM_LogLikelihood(benchmark::State& state) {
  const auto d = zoo(10000, 1);
  const auto p = pool_members(d.logits, Temperature(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(p, d.labels));
}
BENCHMARK(BM_LogLikelihood);

void BM_Ece(benchmark::State& state) {
  const auto d = zoo(10000, 1);
  const auto p = pool_members(d.logits, Temperature(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(ece(p, d.labels, BinningConfig{}));
}
BENCHMARK(BM_Ece);

void BM_Tace(benchmark::State& state) {
  const auto d = zoo(static_cast<std::size_t>(state.range(0)), 1);
  const auto p = pool_members(d.logits, Temperature(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(tace(p, d.labels, BinningConfig{}));
}
BENCHMARK(BM_Tace)->Arg(1000)->Arg(10000);

void BM_AccuracyRejection(benchmark::State& state) {
  const auto d = zoo(10000, 1);
  const auto p = pool_members(d.logits, Temperature(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(accuracy_rejection(p, d.labels));
}
BENCHMARK(BM_AccuracyRejection);

}  // namespace
