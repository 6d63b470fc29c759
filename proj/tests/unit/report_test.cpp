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

#include "uqeval/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>

#include "uqeval/error.hpp"
#include "uqeval/metrics.hpp"

namespace uqeval {
namespace {

MetricReport sample_report() {
  MetricReport r;
  r.command = "evaluate";
  r.inputs = {{"a.uqeb", std::string(64, 'a')}, {"b.uqeb", std::string(64, 'b')}};
  r.pool_mode = "scale-then-pool";
  r.seed = 18446744073709551615ull;
  r.config = {{"bins", std::int64_t{15}}, {"tace_threshold", 1e-3}, {"seed", std::string("7")},
              {"flag", true}};
  r.add_metric({"ll", -0.25, std::nullopt, {}, std::nullopt});
  r.add_metric({"ece", 0.125, 0.01, {{"bins", std::int64_t{15}}}, std::string(kEceCaveat)});
  r.add_metric({"auc_roc", 0.75, std::nullopt, {{"score", std::string("confidence")}},
                std::nullopt});
  r.add_metric({"whole", 2.0, std::nullopt, {}, std::nullopt});
  r.temperatures = {1.5, 0.1 + 0.2};
  r.caveats = {std::string(kAucCaveat), "quote \" and, comma"};
  r.train_cost = 12.5;
  DeeSection d;
  d.params = {{"metric", std::string("ll")}};
  d.baseline = {{1, -1.0, 0.1, 20, false}, {2, -0.8, 0.05, 20, true}};
  d.curve = {{1, 1.0, 1.0, 1.5, false, false, false, -1.0, 0.0},
             {2, 2.0, 1.5, 2.0, true, false, true, -0.5, 0.2}};
  r.dee = d;
  return r;
}

TEST(Report, AucEntriesCarryTheCaveat) {
  const auto r = sample_report();
  EXPECT_FALSE(r.metrics[0].caveat.has_value());
  EXPECT_EQ(r.metrics[2].caveat, std::string(kAucCaveat));
  const auto json = emit_report(r, ReportFormat::kJson);
  EXPECT_NE(json.find("cannot be directly compared"), std::string::npos);
}

TEST(Report, JsonRoundTrips) {
  const auto r = sample_report();
  const auto text = emit_report(r, ReportFormat::kJson);
  EXPECT_EQ(parse_report(text), r);
  EXPECT_EQ(emit_report(parse_report(text), ReportFormat::kJson), text);
}

TEST(Report, EmissionIsByteStable) {
  EXPECT_EQ(emit_report(sample_report(), ReportFormat::kJson),
            emit_report(sample_report(), ReportFormat::kJson));
  EXPECT_EQ(emit_report(sample_report(), ReportFormat::kCsv),
            emit_report(sample_report(), ReportFormat::kCsv));
}

TEST(Report, CanonicalLayout) {
  const auto text = emit_report(sample_report(), ReportFormat::kJson);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.rfind("{\n", 0), 0u);
  // Keys are sorted and indented by two spaces.
  EXPECT_LT(text.find("\n  \"caveats\""), text.find("\n  \"command\""));
  EXPECT_LT(text.find("\n  \"command\""), text.find("\n  \"tool\""));
  // Whole-valued doubles keep a decimal point; 0.1 + 0.2 prints all 17 digits.
  EXPECT_NE(text.find("2.0"), std::string::npos);
  EXPECT_NE(text.find("0.30000000000000004"), std::string::npos);
  EXPECT_NE(text.find("18446744073709551615"), std::string::npos);
  const auto parsed = nlohmann::json::parse(text);
  EXPECT_EQ(parsed["tool"]["name"], kToolName);
  EXPECT_EQ(parsed["metrics"].size(), 4u);
  EXPECT_FALSE(parsed["metrics"][0].contains("std"));
  EXPECT_TRUE(parsed["metrics"][1].contains("std"));
}

TEST(Report, EmptyReportIsValid) {
  MetricReport r;
  r.command = "evaluate";
  const auto text = emit_report(r, ReportFormat::kJson);
  EXPECT_EQ(parse_report(text), r);
  const auto parsed = nlohmann::json::parse(text);
  EXPECT_TRUE(parsed["metrics"].empty());
  EXPECT_FALSE(parsed.contains("dee"));
  EXPECT_FALSE(parsed.contains("train_cost"));
  EXPECT_EQ(emit_report(r, ReportFormat::kCsv), "name,value,std,params,caveat\n");
}

TEST(Report, CsvRows) {
  const auto csv = emit_report(sample_report(), ReportFormat::kCsv);
  EXPECT_EQ(csv.rfind("name,value,std,params,caveat\nll,-0.25,,,\n", 0), 0u);
  EXPECT_NE(csv.find("\nece,0.125,0.01,bins=15,ECE is"), std::string::npos);
  EXPECT_NE(csv.find("\nauc_roc,0.75,,score=confidence,misclassification"), std::string::npos);
  EXPECT_NE(csv.find("\ndee,2.0,,k=2;metric=ll;saturated=true,\n"), std::string::npos);
  EXPECT_NE(csv.find("\ndee_lower,1.5,,k=2;metric=ll;saturated=true,\n"), std::string::npos);
  EXPECT_NE(csv.find("\ndee_upper,1.5,,k=1;metric=ll;saturated=false,\n"), std::string::npos);
}

TEST(Report, RejectsNonFiniteValues) {
  auto r = sample_report();
  r.metrics[0].value = std::numeric_limits<double>::infinity();
  EXPECT_THROW(emit_report(r, ReportFormat::kJson), ValidationError);
  r = sample_report();
  r.temperatures.push_back(std::nan(""));
  EXPECT_THROW(emit_report(r, ReportFormat::kCsv) + emit_report(r, ReportFormat::kJson),
               ValidationError);
}

TEST(Report, MalformedInputIsAValidationError) {
  EXPECT_THROW(parse_report("{"), ValidationError);
  EXPECT_THROW(parse_report("[]"), ValidationError);
  EXPECT_THROW(parse_report("{\"command\": 3}"), ValidationError);
  EXPECT_THROW(parse_report_format("xml"), ValidationError);
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::kCsv);
}

TEST(Manifest, RoundTrips) {
  SynthManifest m;
  m.config = {{"samples", std::int64_t{100}}, {"correlation", 0.5}, {"seed", std::string("3")}};
  m.files = {{"member_000.uqeb", std::string(64, '0')}, {"member_001.uqeb", std::string(64, '1')}};
  const auto text = emit_manifest(m);
  EXPECT_EQ(parse_manifest(text), m);
  EXPECT_EQ(emit_manifest(parse_manifest(text)), text);
  EXPECT_THROW(parse_manifest("nope"), ValidationError);
}

}  // namespace
}  // namespace uqeval
