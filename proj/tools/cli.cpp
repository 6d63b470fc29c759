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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uqeval/calibration.hpp"
#include "uqeval/container.hpp"
#include "uqeval/dee.hpp"
#include "uqeval/digest.hpp"
#include "uqeval/error.hpp"
#include "uqeval/metrics.hpp"
#include "uqeval/parallel.hpp"
#include "uqeval/prob_ops.hpp"
#include "uqeval/report.hpp"
#include "uqeval/synth.hpp"
#include "uqeval/tensor.hpp"

namespace uqeval::cli {
namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string pool_mode = "scale-then-pool";
  std::size_t bins = 15;
  double tace_threshold = 1e-3;
  std::size_t repeats = 5;
  std::size_t threads = 0;
  std::string output;
  std::string format = "json";
};

struct LoadedInput {
  EvalDataset dataset;
  InputDigest digest;
};

std::int64_t as_param(std::size_t v) { return static_cast<std::int64_t>(v); }

LoadedInput load_input(const std::string& path) {
  try {
    const fs::path p(path);
    EvalDataset data = p.extension() == ".csv" ? read_csv(p) : read_container(p);
    return {std::move(data), {path, sha256_file(p)}};
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::vector<LoadedInput> load_inputs(const std::vector<std::string>& paths) {
  std::vector<LoadedInput> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(load_input(p));
  return out;
}

EvalDataset stack_inputs(const std::vector<LoadedInput>& inputs) {
  std::vector<EvalDataset> parts;
  parts.reserve(inputs.size());
  for (const auto& in : inputs) parts.push_back(in.dataset);
  try {
    return stack_members(parts);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("inputs are not label-consistent: ") + e.what());
  }
}

// Every *.uqeb file in the directory, by file name.
std::vector<std::string> pool_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError(dir + ": not a readable directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".uqeb") {
      files.push_back(entry.path().string());
    }
  }
  if (ec) throw IoError(dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError(dir + ": no .uqeb files");
  return files;
}

std::vector<EvalDataset> members_of(const std::vector<LoadedInput>& inputs) {
  std::vector<EvalDataset> out;
  for (const auto& in : inputs) {
    for (auto& m : in.dataset.split_members()) out.push_back(std::move(m));
  }
  return out;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(path + ": cannot open for writing");
  f << text;
  if (!f) throw IoError(path + ": write failed");
}

void add_common(CLI::App& app, CommonFlags& f, bool report_output) {
  app.add_option("--seed", f.seed, "Seed of the pinned generator")->capture_default_str();
  app.add_option("--pool-mode", f.pool_mode, "scale-then-pool or pool-then-scale")
      ->capture_default_str();
  app.add_option("--bins", f.bins, "Bin count M for ECE and TACE")->capture_default_str();
  app.add_option("--tace-threshold", f.tace_threshold, "TACE probability threshold")
      ->capture_default_str();
  app.add_option("--repeats", f.repeats, "Test-time cross-validation repeats")
      ->capture_default_str();
  app.add_option("--threads", f.threads, "Worker threads (0 = all; capped by UQEVAL_THREADS)")
      ->capture_default_str();
  if (report_output) {
    app.add_option("--output,-o", f.output, "Report path (default stdout)");
    app.add_option("--format", f.format, "json or csv")->capture_default_str();
  }
}

BinningConfig binning_of(const CommonFlags& f) {
  BinningConfig b{f.bins, f.tace_threshold};
  b.validate();
  return b;
}

ParamMap common_config(const CommonFlags& f) {
  return {{"bins", as_param(f.bins)},
          {"tace_threshold", f.tace_threshold},
          {"repeats", as_param(f.repeats)},
          {"pool_mode", f.pool_mode},
          {"seed", std::to_string(f.seed)},
          {"format", f.format}};
}

struct EvaluateFlags {
  CommonFlags common;
  std::vector<std::string> inputs;
  std::optional<double> train_cost;
};

void cmd_evaluate(const EvaluateFlags& flags, std::ostream& out) {
  const CommonFlags& f = flags.common;
  const PoolMode mode = parse_pool_mode(f.pool_mode);
  const BinningConfig binning = binning_of(f);
  const ReportFormat format = parse_report_format(f.format);
  const auto inputs = load_inputs(flags.inputs);
  const EvalDataset data = stack_inputs(inputs);

  MetricReport report;
  report.command = "evaluate";
  for (const auto& in : inputs) report.inputs.push_back(in.digest);
  report.pool_mode = std::string(to_string(mode));
  report.seed = f.seed;
  report.config = common_config(f);
  report.config["members"] = as_param(data.members());
  report.config["samples"] = as_param(data.samples());
  report.config["classes"] = as_param(data.classes());
  report.train_cost = flags.train_cost;

  const ProbMatrix probs = pool_members(data.logits, Temperature(1.0), mode);
  const ParamMap base = {{"pool_mode", report.pool_mode}, {"temperature", 1.0}};
  ParamMap binned = base;
  binned["bins"] = as_param(f.bins);
  ParamMap thresholded = binned;
  thresholded["tace_threshold"] = f.tace_threshold;

  report.add_metric({"ll", log_likelihood(probs, data.labels), std::nullopt, base, std::nullopt});
  report.add_metric({"brier", brier_score(probs, data.labels), std::nullopt, base, std::nullopt});
  report.add_metric(
      {"error", classification_error(probs, data.labels), std::nullopt, base, std::nullopt});
  report.add_metric(
      {"ece", ece(probs, data.labels, binning), std::nullopt, binned, std::string(kEceCaveat)});
  report.add_metric({"tace", tace(probs, data.labels, binning), std::nullopt, thresholded,
                     std::string(kTaceCaveat)});
  report.add_metric({"au_arc", accuracy_rejection(probs, data.labels).au_arc, std::nullopt, base,
                     std::nullopt});

  bool detection_defined = true;
  for (const auto& [score, suffix] :
       {std::pair{CertaintyScore::kConfidence, "confidence"},
        std::pair{CertaintyScore::kNegativeEntropy, "entropy"}}) {
    try {
      const DetectionAuc auc = misclassification_auc(probs, data.labels, score);
      ParamMap p = base;
      p["score"] = std::string(suffix);
      report.add_metric({"auc_roc", auc.roc, std::nullopt, p, std::nullopt});
      report.add_metric({"auc_pr", auc.pr, std::nullopt, p, std::nullopt});
    } catch (const ValidationError&) {
      detection_defined = false;
    }
  }
  report.caveats.emplace_back(kAucCaveat);
  if (!detection_defined) {
    report.caveats.emplace_back(
        "misclassification-detection AUCs omitted: every prediction is correct or every "
        "prediction is wrong");
  }
  report.caveats.emplace_back(kEceCaveat);
  report.caveats.emplace_back(kTaceCaveat);

  if (data.samples() >= 4) {
    CrossValidationConfig cv;
    cv.repeats = f.repeats;
    cv.seed = f.seed;
    cv.mode = mode;
    cv.binning = binning;
    cv.threads = resolve_threads(f.threads);
    const std::vector<MetricId> ids = {MetricId::kLogLikelihood, MetricId::kBrier,
                                       MetricId::kError, MetricId::kEce, MetricId::kTace};
    const auto results = calibrated_metrics(data, ids, cv);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      ParamMap p = {{"pool_mode", report.pool_mode}, {"repeats", as_param(f.repeats)}};
      std::optional<std::string> caveat;
      if (ids[k] == MetricId::kEce || ids[k] == MetricId::kTace) p["bins"] = as_param(f.bins);
      if (ids[k] == MetricId::kTace) p["tace_threshold"] = f.tace_threshold;
      if (ids[k] == MetricId::kEce) caveat = std::string(kEceCaveat);
      if (ids[k] == MetricId::kTace) caveat = std::string(kTaceCaveat);
      report.add_metric({"calibrated_" + std::string(to_string(ids[k])), results[k].mean,
                         results[k].std, p, caveat});
    }
    report.temperatures = results.front().temperatures;
  } else {
    report.caveats.emplace_back(
        "calibrated metrics omitted: test-time cross-validation needs at least 4 samples");
  }
  write_text(emit_report(report, format), f.output, out);
}

struct CalibrateFlags {
  CommonFlags common;
  std::vector<std::string> inputs;
};

void cmd_calibrate(const CalibrateFlags& flags, std::ostream& out, std::ostream& err) {
  const PoolMode mode = parse_pool_mode(flags.common.pool_mode);
  const EvalDataset data = stack_inputs(load_inputs(flags.inputs));
  const TemperatureFit fit = find_temperature(data, mode);
  if (fit.boundary) err << "warning: optimum lies on the search boundary\n";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g\n", fit.temperature.value());
  write_text(buf, flags.common.output, out);
}

struct PoolFlags {
  CommonFlags common;
  std::vector<std::string> inputs;
  double temperature = 1.0;
};

void cmd_pool(const PoolFlags& flags) {
  const PoolMode mode = parse_pool_mode(flags.common.pool_mode);
  const Temperature t(flags.temperature);
  const EvalDataset data = stack_inputs(load_inputs(flags.inputs));
  const ProbMatrix probs = pool_members(data.logits, t, mode);
  std::vector<float> logp(probs.values().size());
  for (std::size_t k = 0; k < logp.size(); ++k) {
    logp[k] = static_cast<float>(std::log(std::max(probs.values()[k], kProbabilityFloor)));
  }
  EvalDataset pooled(LogitTensor(1, data.samples(), data.classes(), std::move(logp)), data.labels);
  try {
    write_container(pooled, flags.common.output);
  } catch (const IoError& e) {
    throw IoError(flags.common.output + ": " + e.what());
  }
}

struct DeeFlags {
  CommonFlags common;
  std::string baseline_dir;
  std::string method_dir;
  std::size_t max_size = 0;
  std::size_t resamples = 20;
  std::vector<std::size_t> k_grid;
  std::string metric = "ll";
};

void cmd_dee(const DeeFlags& flags, std::ostream& out) {
  const CommonFlags& f = flags.common;
  ResampleConfig cfg;
  cfg.resamples = flags.resamples;
  cfg.seed = f.seed;
  cfg.mode = parse_pool_mode(f.pool_mode);
  cfg.repeats = f.repeats;
  cfg.metric = parse_metric_id(flags.metric);
  cfg.binning = binning_of(f);
  cfg.threads = resolve_threads(f.threads);
  const ReportFormat format = parse_report_format(f.format);

  const auto baseline_inputs = load_inputs(pool_files(flags.baseline_dir));
  const auto method_inputs = load_inputs(pool_files(flags.method_dir));
  const auto baseline_members = members_of(baseline_inputs);
  const auto method_members = members_of(method_inputs);
  const std::size_t max_size = flags.max_size == 0 ? baseline_members.size() : flags.max_size;

  std::vector<std::size_t> k_grid = flags.k_grid;
  if (k_grid.empty()) {
    for (std::size_t k = 1; k <= std::min(max_size, method_members.size()); ++k) {
      k_grid.push_back(k);
    }
  }
  const MemberPool baseline_pool(baseline_members);
  const DeBaseline baseline = build_de_baseline(baseline_pool, max_size, cfg);
  // The same directory on both sides shares one pool and its cached scores.
  std::error_code ec;
  const bool same_pool = fs::equivalent(flags.baseline_dir, flags.method_dir, ec);
  std::optional<MemberPool> method_storage;
  if (!same_pool) {
    try {
      method_storage.emplace(method_members);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("method pool: ") + e.what());
    }
  }
  const MemberPool& method_pool = same_pool ? baseline_pool : *method_storage;
  const auto curve = dee_curve(method_pool, baseline, k_grid, cfg);

  MetricReport report;
  report.command = "dee";
  for (const auto& in : baseline_inputs) report.inputs.push_back(in.digest);
  for (const auto& in : method_inputs) report.inputs.push_back(in.digest);
  report.pool_mode = std::string(to_string(cfg.mode));
  report.seed = f.seed;
  report.config = common_config(f);
  report.config["baseline_dir"] = flags.baseline_dir;
  report.config["method_dir"] = flags.method_dir;
  report.config["max_size"] = as_param(max_size);
  report.config["resamples"] = as_param(flags.resamples);
  report.config["metric"] = flags.metric;

  DeeSection sec;
  sec.params = {{"metric", flags.metric},
                {"pool_mode", report.pool_mode},
                {"max_size", as_param(max_size)},
                {"pool_size", as_param(baseline.pool_size)},
                {"resamples", as_param(flags.resamples)},
                {"repeats", as_param(f.repeats)}};
  if (cfg.metric == MetricId::kEce || cfg.metric == MetricId::kTace) {
    sec.params["bins"] = as_param(f.bins);
  }
  if (cfg.metric == MetricId::kTace) sec.params["tace_threshold"] = f.tace_threshold;
  for (const auto& s : baseline.sizes) {
    sec.baseline.push_back(
        {as_param(s.size), s.mean, s.std, as_param(s.values.size()), s.exhaustive});
  }
  for (const auto& d : curve) {
    sec.curve.push_back({as_param(d.k), d.value, d.lower, d.upper, d.saturated,
                         d.lower_saturated, d.upper_saturated, d.metric_mean, d.metric_std});
  }
  report.dee = std::move(sec);
  if (std::any_of(curve.begin(), curve.end(), [](const DeeScore& d) { return d.saturated; })) {
    report.caveats.emplace_back(
        "some DEE values saturated at the largest baseline ensemble size; they are lower bounds");
  }
  write_text(emit_report(report, format), f.output, out);
}

struct SynthFlags {
  CommonFlags common;
  ZooConfig zoo;
  std::optional<std::uint64_t> member_seed;
  std::string output_dir;
};

void cmd_synth(SynthFlags flags) {
  flags.zoo.seed = flags.common.seed;
  flags.zoo.member_seed = flags.member_seed;
  flags.zoo.validate();
  const Zoo zoo = generate_zoo(flags.zoo);

  std::error_code ec;
  fs::create_directories(flags.output_dir, ec);
  if (ec) throw IoError(flags.output_dir + ": " + ec.message());

  SynthManifest manifest;
  const ZooConfig& z = flags.zoo;
  manifest.config = {{"samples", as_param(z.samples)},
                     {"classes", as_param(z.classes)},
                     {"members", as_param(z.members)},
                     {"signal", z.signal},
                     {"base_noise", z.base_noise},
                     {"member_noise", z.member_noise},
                     {"correlation", z.correlation},
                     {"distortion", z.distortion},
                     {"seed", std::to_string(z.seed)},
                     {"member_seed", std::to_string(z.member_seed.value_or(z.seed))}};
  for (std::size_t s = 0; s < zoo.pool.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "member_%03zu.uqeb", s);
    const fs::path path = fs::path(flags.output_dir) / name;
    write_container(zoo.pool[s], path);
    manifest.files.push_back({name, sha256_file(path)});
  }
  const fs::path manifest_path = fs::path(flags.output_dir) / "manifest.json";
  std::ostringstream unused;
  write_text(emit_manifest(manifest), manifest_path.string(), unused);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"uqeval: in-domain uncertainty evaluation from raw logits", "uqeval"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  EvaluateFlags eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score pooled members at T = 1 and calibrated");
  evaluate->add_option("inputs", eval.inputs, "UQEB or CSV files, one or more members each")
      ->required();
  add_common(*evaluate, eval.common, true);
  evaluate->add_option("--train-cost", eval.train_cost, "Training cost echoed into the report");

  CalibrateFlags cal;
  auto* calibrate = app.add_subcommand("calibrate", "Print the log-likelihood optimal T");
  calibrate->add_option("inputs", cal.inputs, "UQEB or CSV files")->required();
  add_common(*calibrate, cal.common, false);
  calibrate->add_option("--output,-o", cal.common.output, "Output path (default stdout)");

  PoolFlags pl;
  auto* pool = app.add_subcommand("pool", "Write pooled log-probabilities as one member");
  pool->add_option("inputs", pl.inputs, "UQEB or CSV files")->required();
  add_common(*pool, pl.common, false);
  pool->add_option("--temperature", pl.temperature, "Softmax temperature")->capture_default_str();
  pool->add_option("--output,-o", pl.common.output, "Destination UQEB file")->required();

  DeeFlags de;
  auto* dee = app.add_subcommand("dee", "Deep ensemble equivalent of a method pool");
  dee->add_option("--baseline-dir", de.baseline_dir, "Independently trained pool")->required();
  dee->add_option("--method-dir", de.method_dir, "Pool of the method under test")->required();
  dee->add_option("--max-size", de.max_size, "Largest baseline ensemble L (0 = pool size)")
      ->capture_default_str();
  dee->add_option("--resamples", de.resamples, "Subsets R per ensemble size")
      ->capture_default_str();
  dee->add_option("--k-grid", de.k_grid, "Method ensemble sizes, comma separated")
      ->delimiter(',');
  dee->add_option("--metric", de.metric, "ll, brier, error, ece or tace")->capture_default_str();
  add_common(*dee, de.common, true);

  SynthFlags sy;
  auto* synth = app.add_subcommand("synth", "Write a synthetic model zoo");
  add_common(*synth, sy.common, false);
  synth->add_option("--output-dir,-o", sy.output_dir, "Destination directory")->required();
  synth->add_option("--samples", sy.zoo.samples)->capture_default_str();
  synth->add_option("--classes", sy.zoo.classes)->capture_default_str();
  synth->add_option("--members", sy.zoo.members)->capture_default_str();
  synth->add_option("--signal", sy.zoo.signal)->capture_default_str();
  synth->add_option("--base-noise", sy.zoo.base_noise)->capture_default_str();
  synth->add_option("--member-noise", sy.zoo.member_noise)->capture_default_str();
  synth->add_option("--correlation", sy.zoo.correlation)->capture_default_str();
  synth->add_option("--distortion", sy.zoo.distortion)->capture_default_str();
  synth->add_option("--member-seed", sy.member_seed, "Seed of member perturbations");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (*evaluate) cmd_evaluate(eval, out);
    else if (*calibrate) cmd_calibrate(cal, out, err);
    else if (*pool) cmd_pool(pl);
    else if (*dee) cmd_dee(de, out);
    else if (*synth) cmd_synth(sy);
    return kExitOk;
  } catch (const IoError& e) {
    err << "uqeval: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "uqeval: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "uqeval: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace uqeval::cli
