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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uqeval/version.hpp"

namespace uqeval {

using ParamValue = std::variant<bool, std::int64_t, double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

struct MetricEntry {
  std::string name;
  double value = 0.0;
  std::optional<double> std;
  ParamMap params;  // everything the value depends on (bins, threshold, repeats, mode, ...)
  std::optional<std::string> caveat;

  friend bool operator==(const MetricEntry&, const MetricEntry&) = default;
};

struct InputDigest {
  std::string path;
  std::string sha256;

  friend bool operator==(const InputDigest&, const InputDigest&) = default;
};

struct BaselineRow {
  std::int64_t size = 0;
  double mean = 0.0;
  double std = 0.0;
  std::int64_t draws = 0;
  bool exhaustive = false;

  friend bool operator==(const BaselineRow&, const BaselineRow&) = default;
};

struct DeeRow {
  std::int64_t k = 0;
  double value = 1.0;
  double lower = 1.0;
  double upper = 1.0;
  bool saturated = false;
  bool lower_saturated = false;
  bool upper_saturated = false;
  double metric_mean = 0.0;
  double metric_std = 0.0;

  friend bool operator==(const DeeRow&, const DeeRow&) = default;
};

struct DeeSection {
  ParamMap params;
  std::vector<BaselineRow> baseline;
  std::vector<DeeRow> curve;

  friend bool operator==(const DeeSection&, const DeeSection&) = default;
};

// Machine-readable result of one CLI run. Field names are the stable JSON
// keys documented in docs/report_schema.md.
struct MetricReport {
  std::string tool = kToolName;
  std::string version = kVersion;
  std::string command;
  std::vector<InputDigest> inputs;
  std::string pool_mode;
  std::uint64_t seed = 0;
  ParamMap config;
  std::vector<MetricEntry> metrics;
  std::vector<double> temperatures;
  std::vector<std::string> caveats;
  std::optional<double> train_cost;
  std::optional<DeeSection> dee;

  // Appends an entry; AUC entries get the comparability caveat attached.
  void add_metric(MetricEntry entry);

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

enum class ReportFormat { kJson, kCsv };

ReportFormat parse_report_format(std::string_view text);

// JSON output is canonical: keys sorted, floats with 17 significant digits,
// two-space indentation, newline-terminated. CSV has one metric per row.
std::string emit_report(const MetricReport& report, ReportFormat format);

// Inverse of the JSON emitter; throws ValidationError on malformed input.
MetricReport parse_report(std::string_view json);

// Index of a synthetic pool written to disk.
struct SynthManifest {
  std::string tool = kToolName;
  std::string version = kVersion;
  ParamMap config;
  std::vector<InputDigest> files;  // paths relative to the manifest

  friend bool operator==(const SynthManifest&, const SynthManifest&) = default;
};

std::string emit_manifest(const SynthManifest& manifest);
SynthManifest parse_manifest(std::string_view json);

}  // namespace uqeval
