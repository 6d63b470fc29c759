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

#include "uqeval/parallel.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace uqeval {
namespace {

TEST(ParallelFor, RunsEveryIndexOnce) {
  for (std::size_t threads : {1u, 2u, 5u, 64u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) ASSERT_EQ(h.load(), 1) << threads;
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsTheLowestFailingIndex) {
  for (std::size_t threads : {1u, 4u}) {
    std::atomic<int> ran{0};
    try {
      parallel_for(100, threads, [&](std::size_t i) {
        ran.fetch_add(1);
        if (i == 17 || i == 60) throw std::runtime_error("index " + std::to_string(i));
      });
      FAIL() << "no exception";
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "index 17");
    }
    EXPECT_GE(ran.load(), 18);
  }
}

TEST(ResolveThreads, HonoursRequestsAndTheCap) {
  const char* saved = std::getenv("UQEVAL_THREADS");
  const std::string keep = saved ? saved : "";
  unsetenv("UQEVAL_THREADS");
  EXPECT_EQ(resolve_threads(3), 3u);
  EXPECT_GE(resolve_threads(0), 1u);
  setenv("UQEVAL_THREADS", "2", 1);
  EXPECT_EQ(resolve_threads(8), 2u);
  EXPECT_EQ(resolve_threads(1), 1u);
  EXPECT_LE(resolve_threads(0), 2u);
  if (saved) setenv("UQEVAL_THREADS", keep.c_str(), 1);
  else unsetenv("UQEVAL_THREADS");
}

}  // namespace
}  // namespace uqeval
