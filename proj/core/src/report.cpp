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

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "uqeval/error.hpp"
#include "uqeval/metrics.hpp"

namespace uqeval {

using nlohmann::json;

namespace {

bool is_auc(const std::string& name) { return name.rfind("auc", 0) == 0; }

std::string format_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("report values must be finite");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_canonical(const json& j, std::string& out, int depth) {
  const auto indent = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (j.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case json::value_t::number_float: out += format_double(j.get<double>()); break;
    case json::value_t::string: out += j.dump(); break;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        indent(depth + 1);
        write_canonical(j[k], out, depth + 1);
        out += k + 1 < j.size() ? ",\n" : "\n";
      }
      indent(depth);
      out += "]";
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        indent(depth + 1);
        out += json(it.key()).dump();
        out += ": ";
        write_canonical(it.value(), out, depth + 1);
        out += k + 1 < j.size() ? ",\n" : "\n";
      }
      indent(depth);
      out += "}";
      break;
    }
    default: throw ValidationError("unsupported JSON value in report");
  }
}

json params_to_json(const ParamMap& params) {
  json out = json::object();
  for (const auto& [key, value] : params) {
    std::visit([&](const auto& v) { out[key] = v; }, value);
  }
  return out;
}

ParamMap params_from_json(const json& j) {
  ParamMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_boolean()) out[it.key()] = v.get<bool>();
    else if (v.is_number_integer()) out[it.key()] = v.get<std::int64_t>();
    else if (v.is_number_float()) out[it.key()] = v.get<double>();
    else if (v.is_string()) out[it.key()] = v.get<std::string>();
    else throw ValidationError("unsupported parameter type for '" + it.key() + "'");
  }
  return out;
}

json to_json(const MetricReport& r) {
  json j = json::object();
  j["tool"] = {{"name", r.tool}, {"version", r.version}};
  j["command"] = r.command;
  j["inputs"] = json::array();
  for (const auto& in : r.inputs) j["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}});
  j["pool_mode"] = r.pool_mode;
  j["seed"] = r.seed;
  j["config"] = params_to_json(r.config);
  j["metrics"] = json::array();
  for (const auto& m : r.metrics) {
    json e = {{"name", m.name}, {"value", m.value}, {"params", params_to_json(m.params)}};
    if (m.std) e["std"] = *m.std;
    if (m.caveat) e["caveat"] = *m.caveat;
    else if (is_auc(m.name)) e["caveat"] = std::string(kAucCaveat);
    j["metrics"].push_back(std::move(e));
  }
  j["temperatures"] = r.temperatures;
  j["caveats"] = r.caveats;
  if (r.train_cost) j["train_cost"] = *r.train_cost;
  if (r.dee) {
    json d = json::object();
    d["params"] = params_to_json(r.dee->params);
    d["baseline"] = json::array();
    for (const auto& b : r.dee->baseline) {
      d["baseline"].push_back({{"size", b.size}, {"mean", b.mean}, {"std", b.std},
                               {"draws", b.draws}, {"exhaustive", b.exhaustive}});
    }
    d["curve"] = json::array();
    for (const auto& c : r.dee->curve) {
      d["curve"].push_back({{"k", c.k}, {"value", c.value}, {"lower", c.lower},
                            {"upper", c.upper}, {"saturated", c.saturated},
                            {"lower_saturated", c.lower_saturated},
                            {"upper_saturated", c.upper_saturated},
                            {"metric_mean", c.metric_mean}, {"metric_std", c.metric_std}});
    }
    j["dee"] = std::move(d);
  }
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string params_text(const ParamMap& params) {
  std::string out;
  for (const auto& [key, value] : params) {
    if (!out.empty()) out += ';';
    out += key + "=";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) out += v ? "true" : "false";
          else if constexpr (std::is_same_v<T, double>) out += format_double(v);
          else if constexpr (std::is_same_v<T, std::string>) out += v;
          else out += std::to_string(v);
        },
        value);
  }
  return out;
}

std::string emit_csv(const MetricReport& r) {
  std::string out = "name,value,std,params,caveat\n";
  auto row = [&](const std::string& name, double value, std::optional<double> std_value,
                 const ParamMap& params, const std::optional<std::string>& caveat) {
    out += csv_field(name) + "," + format_double(value) + ",";
    if (std_value) out += format_double(*std_value);
    out += "," + csv_field(params_text(params)) + ",";
    if (caveat) out += csv_field(*caveat);
    out += "\n";
  };
  for (const auto& m : r.metrics) {
    std::optional<std::string> caveat = m.caveat;
    if (!caveat && is_auc(m.name)) caveat = std::string(kAucCaveat);
    row(m.name, m.value, m.std, m.params, caveat);
  }
  if (r.dee) {
    for (const auto& c : r.dee->curve) {
      ParamMap params = r.dee->params;
      params["k"] = c.k;
      params["saturated"] = c.saturated;
      row("dee", c.value, std::nullopt, params, std::nullopt);
      row("dee_lower", c.lower, std::nullopt, params, std::nullopt);
      row("dee_upper", c.upper, std::nullopt, params, std::nullopt);
    }
  }
  return out;
}

}  // namespace

void MetricReport::add_metric(MetricEntry entry) {
  if (is_auc(entry.name) && !entry.caveat) entry.caveat = std::string(kAucCaveat);
  metrics.push_back(std::move(entry));
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  throw ValidationError("unknown report format '" + std::string(text) + "' (expected json or csv)");
}

std::string emit_report(const MetricReport& report, ReportFormat format) {
  if (format == ReportFormat::kCsv) return emit_csv(report);
  std::string out;
  write_canonical(to_json(report), out, 0);
  out += "\n";
  return out;
}

MetricReport parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    MetricReport r;
    r.tool = j.at("tool").at("name").get<std::string>();
    r.version = j.at("tool").at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    for (const auto& in : j.at("inputs")) {
      r.inputs.push_back({in.at("path").get<std::string>(), in.at("sha256").get<std::string>()});
    }
    r.pool_mode = j.at("pool_mode").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = params_from_json(j.at("config"));
    for (const auto& e : j.at("metrics")) {
      MetricEntry m;
      m.name = e.at("name").get<std::string>();
      m.value = e.at("value").get<double>();
      if (e.contains("std")) m.std = e.at("std").get<double>();
      m.params = params_from_json(e.at("params"));
      if (e.contains("caveat")) m.caveat = e.at("caveat").get<std::string>();
      r.metrics.push_back(std::move(m));
    }
    r.temperatures = j.at("temperatures").get<std::vector<double>>();
    r.caveats = j.at("caveats").get<std::vector<std::string>>();
    if (j.contains("train_cost")) r.train_cost = j.at("train_cost").get<double>();
    if (j.contains("dee")) {
      const auto& d = j.at("dee");
      DeeSection sec;
      sec.params = params_from_json(d.at("params"));
      for (const auto& b : d.at("baseline")) {
        sec.baseline.push_back({b.at("size").get<std::int64_t>(), b.at("mean").get<double>(),
                                b.at("std").get<double>(), b.at("draws").get<std::int64_t>(),
                                b.at("exhaustive").get<bool>()});
      }
      for (const auto& c : d.at("curve")) {
        sec.curve.push_back({c.at("k").get<std::int64_t>(), c.at("value").get<double>(),
                             c.at("lower").get<double>(), c.at("upper").get<double>(),
                             c.at("saturated").get<bool>(), c.at("lower_saturated").get<bool>(),
                             c.at("upper_saturated").get<bool>(),
                             c.at("metric_mean").get<double>(), c.at("metric_std").get<double>()});
      }
      r.dee = std::move(sec);
    }
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string emit_manifest(const SynthManifest& m) {
  json j = json::object();
  j["tool"] = {{"name", m.tool}, {"version", m.version}};
  j["config"] = params_to_json(m.config);
  j["files"] = json::array();
  for (const auto& f : m.files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}});
  std::string out;
  write_canonical(j, out, 0);
  out += "\n";
  return out;
}

SynthManifest parse_manifest(std::string_view text) {
  try {
    const json j = json::parse(text);
    SynthManifest m;
    m.tool = j.at("tool").at("name").get<std::string>();
    m.version = j.at("tool").at("version").get<std::string>();
    m.config = params_from_json(j.at("config"));
    for (const auto& f : j.at("files")) {
      m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed manifest JSON: ") + e.what());
  }
}

}  // namespace uqeval
