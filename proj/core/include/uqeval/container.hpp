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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "uqeval/tensor.hpp"

namespace uqeval {

// UQEB binary container, little-endian throughout:
//
//   offset  size  field
//   0       4     magic "UQEB"
//   4       2     version (= 1), u16
//   6       2     dtype code (= 1, f32), u16
//   8       8     S members, u64
//   16      8     n samples, u64
//   24      8     C classes, u64
//   32      4n    labels, u32 each
//   32+4n   4SnC  logits, f32 each, member-major
inline constexpr std::size_t kContainerHeaderSize = 32;
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::uint16_t kDtypeF32 = 1;

std::vector<std::byte> encode_container(const EvalDataset& dataset);

// Throws ContainerError on any malformed input.
EvalDataset decode_container(std::span<const std::byte> bytes);

// Throws IoError if the file cannot be read, ContainerError if it is
// malformed.
EvalDataset read_container(const std::filesystem::path& path);
void write_container(const EvalDataset& dataset,
                     const std::filesystem::path& path);

// CSV with header `logit_0,...,logit_{C-1},label`, one sample per row; the
// dataset has a single member. Values are written with 9 significant digits,
// which round-trips every 32-bit float.
EvalDataset read_csv(const std::filesystem::path& path);
EvalDataset parse_csv(const std::string& text);
std::string format_csv(const EvalDataset& dataset);
void write_csv(const EvalDataset& dataset, const std::filesystem::path& path);

}  // namespace uqeval
