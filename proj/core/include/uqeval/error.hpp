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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace uqeval {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (shape, range, finiteness, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The filesystem refused a read or a write.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class ContainerErrorKind {
  kBadMagic,
  kVersionMismatch,
  kUnsupportedDtype,
  kInvalidShape,
  kTruncatedPayload,
  kTrailingBytes,
  kLabelOutOfRange,
  kNonFiniteLogit,
};

const char* to_string(ContainerErrorKind kind);

// Malformed UQEB payload. `offset()` is the byte position of the offending
// field when one can be named.
class ContainerError : public ValidationError {
 public:
  ContainerError(ContainerErrorKind kind, std::optional<std::uint64_t> offset,
                 const std::string& detail = {});

  ContainerErrorKind kind() const noexcept { return kind_; }
  std::optional<std::uint64_t> offset() const noexcept { return offset_; }

 private:
  ContainerErrorKind kind_;
  std::optional<std::uint64_t> offset_;
};

}  // namespace uqeval
