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
#include <functional>

namespace uqeval {

// Worker count for a request: 0 means "as many as the hardware offers".
// The UQEVAL_THREADS environment variable caps the result when set.
std::size_t resolve_threads(std::size_t requested);

// Runs fn(0..count-1) on up to `threads` workers. Each index is executed
// exactly once; callers write results into per-index slots so the outcome
// never depends on the schedule. The exception thrown by the lowest failing
// index is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace uqeval
