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

#include "uqeval/container.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "uqeval/error.hpp"

namespace uqeval {

const char* to_string(ContainerErrorKind kind) {
  switch (kind) {
    case ContainerErrorKind::kBadMagic: return "bad magic";
    case ContainerErrorKind::kVersionMismatch: return "version mismatch";
    case ContainerErrorKind::kUnsupportedDtype: return "unsupported dtype";
    case ContainerErrorKind::kInvalidShape: return "invalid shape";
    case ContainerErrorKind::kTruncatedPayload: return "truncated payload";
    case ContainerErrorKind::kTrailingBytes: return "trailing bytes";
    case ContainerErrorKind::kLabelOutOfRange: return "label out of range";
    case ContainerErrorKind::kNonFiniteLogit: return "non-finite logit";
  }
  return "container error";
}

namespace {

std::string describe(ContainerErrorKind kind, std::optional<std::uint64_t> offset,
                     const std::string& detail) {
  std::string msg = to_string(kind);
  if (offset) msg += " at byte offset " + std::to_string(*offset);
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

constexpr char kMagic[4] = {'U', 'Q', 'E', 'B'};

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
  for (int b = 0; b < 2; ++b) out.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xFF));
}
void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xFF));
}
void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xFF));
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  T v = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    v |= static_cast<T>(std::to_integer<std::uint8_t>(bytes[offset + b])) << (8 * b);
  }
  return v;
}

}  // namespace

ContainerError::ContainerError(ContainerErrorKind kind,
                               std::optional<std::uint64_t> offset,
                               const std::string& detail)
    : ValidationError(describe(kind, offset, detail)), kind_(kind), offset_(offset) {}

std::vector<std::byte> encode_container(const EvalDataset& dataset) {
  const auto& t = dataset.logits;
  std::vector<std::byte> out;
  out.reserve(kContainerHeaderSize + 4 * dataset.samples() + 4 * t.values().size());
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_u16(out, kContainerVersion);
  put_u16(out, kDtypeF32);
  put_u64(out, t.members());
  put_u64(out, t.samples());
  put_u64(out, t.classes());
  for (std::uint32_t y : dataset.labels.values()) put_u32(out, y);
  for (float v : t.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

EvalDataset decode_container(std::span<const std::byte> bytes) {
  using K = ContainerErrorKind;
  if (bytes.size() < sizeof(kMagic)) {
    throw ContainerError(K::kTruncatedPayload, bytes.size(), "file shorter than magic");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ContainerError(K::kBadMagic, 0);
  }
  if (bytes.size() < kContainerHeaderSize) {
    throw ContainerError(K::kTruncatedPayload, bytes.size(), "incomplete header");
  }
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kContainerVersion) {
    throw ContainerError(K::kVersionMismatch, 4, "found version " + std::to_string(version));
  }
  const auto dtype = get_le<std::uint16_t>(bytes, 6);
  if (dtype != kDtypeF32) {
    throw ContainerError(K::kUnsupportedDtype, 6, "found dtype code " + std::to_string(dtype));
  }
  const auto members = get_le<std::uint64_t>(bytes, 8);
  const auto samples = get_le<std::uint64_t>(bytes, 16);
  const auto classes = get_le<std::uint64_t>(bytes, 24);
  if (members < 1) throw ContainerError(K::kInvalidShape, 8, "S must be >= 1");
  if (samples < 1) throw ContainerError(K::kInvalidShape, 16, "n must be >= 1");
  if (classes < 2) throw ContainerError(K::kInvalidShape, 24, "C must be >= 2");

  // Reject shapes whose payload size cannot be represented.
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max() / 8;
  if (samples > kMax / classes || members > kMax / (samples * classes)) {
    throw ContainerError(K::kInvalidShape, 8, "payload size overflows");
  }
  const std::uint64_t logit_count = members * samples * classes;
  const std::uint64_t label_end = kContainerHeaderSize + 4 * samples;
  const std::uint64_t expected = label_end + 4 * logit_count;
  if (bytes.size() < expected) {
    throw ContainerError(K::kTruncatedPayload, bytes.size(),
                         "expected " + std::to_string(expected) + " bytes, found " +
                             std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw ContainerError(K::kTrailingBytes, expected);
  }

  std::vector<std::uint32_t> labels(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::uint64_t off = kContainerHeaderSize + 4 * i;
    labels[i] = get_le<std::uint32_t>(bytes, off);
    if (labels[i] >= classes) {
      throw ContainerError(K::kLabelOutOfRange, off,
                           "label " + std::to_string(labels[i]) + " with C=" +
                               std::to_string(classes));
    }
  }
  std::vector<float> values(logit_count);
  for (std::uint64_t k = 0; k < logit_count; ++k) {
    const std::uint64_t off = label_end + 4 * k;
    values[k] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, off));
    if (!std::isfinite(values[k])) throw ContainerError(K::kNonFiniteLogit, off);
  }
  return EvalDataset(LogitTensor(members, samples, classes, std::move(values)),
                     LabelVector(std::move(labels), classes));
}

EvalDataset read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  try {
    return decode_container(std::as_bytes(std::span<const char>(raw)));
  } catch (const ContainerError& e) {
    throw ContainerError(e.kind(), e.offset(), path.string());
  }
}

void write_container(const EvalDataset& dataset, const std::filesystem::path& path) {
  const auto bytes = encode_container(dataset);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

EvalDataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t classes = 0;
  bool have_header = false;
  std::vector<float> values;
  std::vector<std::uint32_t> labels;

  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    auto fields = split_fields(row);
    for (auto& f : fields) f = trim(f);
    const std::string where = "line " + std::to_string(line_no);

    if (!have_header) {
      if (fields.back() != "label") throw ValidationError(where + ": missing label column");
      classes = fields.size() - 1;
      for (std::size_t c = 0; c < classes; ++c) {
        if (fields[c] != "logit_" + std::to_string(c)) {
          throw ValidationError(where + ": expected header column logit_" + std::to_string(c));
        }
      }
      if (classes < 2) throw ValidationError(where + ": need at least two logit columns");
      have_header = true;
      continue;
    }
    if (fields.size() != classes + 1) {
      throw ValidationError(where + ": ragged row with " + std::to_string(fields.size()) +
                            " cells, expected " + std::to_string(classes + 1));
    }
    for (std::size_t c = 0; c < classes; ++c) {
      float v = 0.0f;
      const auto f = fields[c];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || f.empty()) {
        throw ValidationError(where + ": non-numeric cell '" + std::string(f) + "'");
      }
      if (!std::isfinite(v)) throw ValidationError(where + ": non-finite logit");
      values.push_back(v);
    }
    std::uint64_t y = 0;
    const auto f = fields[classes];
    const auto res = std::from_chars(f.data(), f.data() + f.size(), y);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || f.empty()) {
      throw ValidationError(where + ": non-numeric label '" + std::string(f) + "'");
    }
    if (y >= classes) {
      throw ValidationError(where + ": label out of range (" + std::to_string(y) +
                            " with " + std::to_string(classes) + " classes)");
    }
    labels.push_back(static_cast<std::uint32_t>(y));
  }
  if (!have_header) throw ValidationError("empty CSV: missing header");
  if (labels.empty()) throw ValidationError("CSV has no data rows");
  const std::size_t n = labels.size();
  return EvalDataset(LogitTensor(1, n, classes, std::move(values)),
                     LabelVector(std::move(labels), classes));
}

EvalDataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string format_csv(const EvalDataset& dataset) {
  if (dataset.members() != 1) {
    throw ValidationError("CSV holds a single member; dataset has " +
                          std::to_string(dataset.members()));
  }
  std::string out;
  const std::size_t C = dataset.classes();
  for (std::size_t c = 0; c < C; ++c) out += "logit_" + std::to_string(c) + ",";
  out += "label\n";
  char buf[32];
  for (std::size_t i = 0; i < dataset.samples(); ++i) {
    for (std::size_t c = 0; c < C; ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g,", static_cast<double>(dataset.logits.at(0, i, c)));
      out += buf;
    }
    out += std::to_string(dataset.labels[i]) + "\n";
  }
  return out;
}

void write_csv(const EvalDataset& dataset, const std::filesystem::path& path) {
  const auto text = format_csv(dataset);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace uqeval
