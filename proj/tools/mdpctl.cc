// Copyright 2026 The mdp-interp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mdpctl: synthesize, audit and compare perturbation mechanisms.
//
// Exit codes: 0 success, 2 configuration error, 3 solver error, 4 I/O error.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "mdp/audit.h"
#include "mdp/baselines.h"
#include "mdp/budget.h"
#include "mdp/config.h"
#include "mdp/evaluation.h"
#include "mdp/interpolation.h"
#include "mdp/mechanism_io.h"
#include "mdp/parallel.h"
#include "mdp/pipeline.h"
#include "mdp/synth.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr char kVersion[] = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 2, kSolverError = 3, kIoError = 4 };

// A status tagged with the exit code it maps to.
struct Failure {
  ExitCode code;
  absl::Status status;
};

Failure ConfigFailure(absl::Status s) { return {kConfigError, std::move(s)}; }
Failure IoFailure(absl::Status s) { return {kIoError, std::move(s)}; }
Failure SolverFailure(absl::Status s) {
  if (absl::IsNotFound(s) || absl::IsPermissionDenied(s)) {
    return {kIoError, std::move(s)};
  }
  return {kSolverError, std::move(s)};
}

struct CommonFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  int threads = 0;
  std::string out_dir = "out";
  std::string eps_list;
  std::vector<std::string> methods;
  bool timing = false;
};

// Shortest text that parses back to the same double.
std::string FormatDouble(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string EpsLabel(double eps) { return absl::StrFormat("%g", eps); }

absl::StatusOr<std::vector<double>> ParseEpsList(const std::string& text) {
  std::vector<double> eps;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v = 0.0;
    if (!absl::SimpleAtod(part, &v) || !(v > 0.0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("flag --eps: bad value '", part, "'"));
    }
    eps.push_back(v);
  }
  if (eps.empty()) return absl::InvalidArgumentError("flag --eps: empty list");
  return eps;
}

absl::Status CheckMethodTag(const std::string& tag) {
  std::string base = tag;
  if (base.rfind("RMP-", 0) == 0) base = base.substr(4);
  for (const std::string& known : mdp::BaseMethodTags()) {
    if (base == known) return absl::OkStatus();
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown method tag '", tag, "'"));
}

// Loads the config file (or defaults) and applies flag overrides.
std::optional<Failure> ResolveConfig(const CommonFlags& flags,
                                     mdp::RunConfig& config) {
  if (!flags.config_path.empty()) {
    absl::StatusOr<mdp::RunConfig> c = mdp::LoadConfigFile(flags.config_path);
    if (!c.ok()) {
      return absl::IsNotFound(c.status()) ? IoFailure(c.status())
                                          : ConfigFailure(c.status());
    }
    config = *std::move(c);
  }
  if (flags.seed.has_value()) {
    config.seed = *flags.seed;
    config.instance.seed = *flags.seed;
  }
  if (!flags.eps_list.empty()) {
    absl::StatusOr<std::vector<double>> eps = ParseEpsList(flags.eps_list);
    if (!eps.ok()) return ConfigFailure(eps.status());
    config.eps = *std::move(eps);
  }
  if (!flags.methods.empty()) config.methods = flags.methods;
  for (const std::string& tag : config.methods) {
    if (absl::Status s = CheckMethodTag(tag); !s.ok()) return ConfigFailure(s);
  }
  config.options.threads =
      flags.threads > 0 ? flags.threads : mdp::DefaultThreads();
  return std::nullopt;
}

absl::StatusOr<mdp::Instance> LoadInstance(const mdp::RunConfig& config,
                                           uint64_t seed) {
  if (!config.instance_dir.empty()) {
    return mdp::ReadInstanceBundle(config.instance_dir);
  }
  mdp::SynthSpec spec = config.instance;
  spec.seed = seed;
  return mdp::SynthesizeInstance(spec);
}

absl::Status WriteText(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    return absl::NotFoundError(absl::StrCat("cannot write ", path.string()));
  }
  return absl::OkStatus();
}

// Records written files relative to the output directory.
class OutputSet {
 public:
  explicit OutputSet(fs::path root) : root_(std::move(root)) {}

  void Record(const std::string& rel) { files_.push_back(rel); }

  absl::Status Write(const std::string& rel, const std::string& text) {
    files_.push_back(rel);
    return WriteText(root_ / rel, text);
  }

  absl::Status WriteManifest(const std::string& command,
                             const mdp::RunConfig& config) {
    Json j;
    j["tool"] = "mdpctl";
    j["version"] = kVersion;
    j["command"] = command;
    j["config_hash"] = mdp::ConfigHash(config);
    j["seed"] = config.seed;
    std::vector<std::string> sorted = files_;
    std::sort(sorted.begin(), sorted.end());
    j["files"] = sorted;
    return WriteText(root_ / "manifest.json", j.dump(2) + "\n");
  }

  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

std::string WallTime(bool timing, double ms) {
  return timing ? absl::StrFormat("%.3f", ms) : "NA";
}

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::optional<Failure> RunSynthesize(const CommonFlags& flags) {
  mdp::RunConfig config;
  if (auto f = ResolveConfig(flags, config)) return f;
  absl::StatusOr<mdp::Instance> inst = LoadInstance(config, config.seed);
  if (!inst.ok()) return SolverFailure(inst.status());

  OutputSet out(flags.out_dir);
  if (absl::Status s = mdp::WriteInstanceBundle(*inst, (out.root() / "instance").string());
      !s.ok()) {
    return IoFailure(s);
  }
  out.Record("instance/manifest.json");
  for (const std::string& tag : config.methods) {
    for (double eps : config.eps) {
      const std::string stem = absl::StrCat("mechanisms/", tag, "_eps", EpsLabel(eps));
      std::shared_ptr<const mdp::PerturbationMechanism> mech;
      if (tag == "AIPO") {
        absl::StatusOr<mdp::AipoResult> r = mdp::BuildAipo(*inst, eps, config.options);
        if (!r.ok()) return SolverFailure(r.status());
        mech = r->mechanism;
        if (config.options.budget_mode == mdp::BudgetMode::kSweep) {
          std::ostringstream csv;
          mdp::WriteLossCurveCsv(r->curve, csv);
          if (absl::Status s = out.Write(stem + "_curve.csv", csv.str()); !s.ok()) {
            return IoFailure(s);
          }
        }
      } else {
        absl::StatusOr<std::shared_ptr<const mdp::PerturbationMechanism>> m =
            mdp::BuildMethod(tag, *inst, eps, config.options);
        if (!m.ok()) return SolverFailure(m.status());
        mech = *std::move(m);
      }
      absl::StatusOr<std::string> json = mdp::MechanismToJson(*mech);
      if (!json.ok()) return SolverFailure(json.status());
      if (absl::Status s = out.Write(stem + ".json", *json); !s.ok()) {
        return IoFailure(s);
      }
      const mdp::PerturbationTable* table = nullptr;
      if (auto* im = dynamic_cast<const mdp::InterpolatedMechanism*>(mech.get())) {
        table = &im->table();
      } else if (auto* cm =
                     dynamic_cast<const mdp::CellConstantMechanism*>(mech.get())) {
        table = &cm->table();
      }
      if (table != nullptr) {
        std::ostringstream csv;
        mdp::WriteTableCsv(*table, csv);
        if (absl::Status s = out.Write(stem + "_table.csv", csv.str()); !s.ok()) {
          return IoFailure(s);
        }
      }
      std::cout << "wrote " << stem << ".json\n";
    }
  }
  if (absl::Status s = out.WriteManifest("synthesize", config); !s.ok()) {
    return IoFailure(s);
  }
  return std::nullopt;
}

struct AuditFlags {
  std::string mechanism_path;
  std::optional<double> eps;
  std::optional<size_t> samples;
};

std::optional<Failure> RunAuditCommand(const CommonFlags& flags,
                                       const AuditFlags& audit_flags) {
  mdp::RunConfig config;
  if (auto f = ResolveConfig(flags, config)) return f;
  absl::StatusOr<std::shared_ptr<const mdp::PerturbationMechanism>> mech =
      mdp::ReadMechanismFile(audit_flags.mechanism_path);
  if (!mech.ok()) {
    return absl::IsNotFound(mech.status()) ? IoFailure(mech.status())
                                           : ConfigFailure(mech.status());
  }

  // The audit domain is the mechanism's own partition when it has one.
  std::optional<mdp::Box> domain;
  double mech_eps = 0.0;
  mdp::Metric metric = config.options.metric;
  const mdp::PerturbationMechanism* inner = mech->get();
  if (auto* rm = dynamic_cast<const mdp::RemappedMechanism*>(inner)) {
    inner = &rm->base();
  }
  if (auto* m = dynamic_cast<const mdp::InterpolatedMechanism*>(inner)) {
    domain = m->partition().bounds();
    mech_eps = m->budget().total_eps;
    metric = m->budget().metric;
  } else if (auto* m = dynamic_cast<const mdp::CellConstantMechanism*>(inner)) {
    domain = m->partition().bounds();
    mech_eps = m->eps();
    metric = m->metric();
  } else if (auto* m = dynamic_cast<const mdp::ExponentialMechanism*>(inner)) {
    mech_eps = m->eps();
    metric = m->metric();
  } else if (auto* m =
                 dynamic_cast<const mdp::TruncatedExponentialMechanism*>(inner)) {
    mech_eps = m->eps();
    metric = m->metric();
  }
  if (!domain.has_value()) {
    absl::StatusOr<mdp::Instance> inst = LoadInstance(config, config.seed);
    if (!inst.ok()) return SolverFailure(inst.status());
    domain = inst->box;
  }

  mdp::AuditOptions opts;
  opts.eps = audit_flags.eps.value_or(mech_eps);
  if (!(opts.eps > 0.0)) {
    return ConfigFailure(absl::InvalidArgumentError("flag --eps: must be > 0"));
  }
  opts.metric = metric;
  opts.sample_count = audit_flags.samples.value_or(config.audit.samples);
  opts.seed = config.seed;
  opts.top_k = config.audit.top_k;
  opts.histogram_bins = config.audit.histogram_bins;
  opts.threads = config.options.threads;
  absl::StatusOr<mdp::AuditReport> report = mdp::RunAudit(**mech, *domain, opts);
  if (!report.ok()) return SolverFailure(report.status());

  OutputSet out(flags.out_dir);
  std::ostringstream hist;
  mdp::WriteHistogramCsv(*report, hist);
  if (absl::Status s = out.Write("audit.json", mdp::AuditReportToJson(*report));
      !s.ok()) {
    return IoFailure(s);
  }
  if (absl::Status s = out.Write("histogram.csv", hist.str()); !s.ok()) {
    return IoFailure(s);
  }
  if (absl::Status s = out.WriteManifest("audit", config); !s.ok()) {
    return IoFailure(s);
  }
  std::cout << absl::StrFormat("violation_ratio %.4f max_ppr %.6g\n",
                               report->violation_ratio, report->max_ppr);
  return std::nullopt;
}

struct ResultCell {
  std::vector<double> loss;
  std::vector<double> violation;
  double wall_ms = 0.0;
};

std::pair<double, double> MeanCi(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, 1.96 * std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

std::optional<Failure> RunCompare(const CommonFlags& flags) {
  mdp::RunConfig config;
  if (auto f = ResolveConfig(flags, config)) return f;
  std::vector<std::string> rows = {"LB"};
  rows.insert(rows.end(), config.methods.begin(), config.methods.end());
  std::map<std::pair<size_t, size_t>, ResultCell> cells;  // (row, eps index)

  for (int rep = 0; rep < config.replicates; ++rep) {
    const uint64_t seed = config.seed + static_cast<uint64_t>(rep);
    absl::StatusOr<mdp::Instance> inst = LoadInstance(config, seed);
    if (!inst.ok()) return SolverFailure(inst.status());
    for (size_t e = 0; e < config.eps.size(); ++e) {
      const double eps = config.eps[e];
      auto start = std::chrono::steady_clock::now();
      absl::StatusOr<double> lb =
          mdp::InstanceLowerBound(*inst, eps, config.options);
      if (!lb.ok()) return SolverFailure(lb.status());
      ResultCell& lb_cell = cells[{0, e}];
      lb_cell.loss.push_back(*lb);
      lb_cell.wall_ms += ElapsedMs(start);
      for (size_t m = 0; m < config.methods.size(); ++m) {
        start = std::chrono::steady_clock::now();
        absl::StatusOr<std::shared_ptr<const mdp::PerturbationMechanism>> mech =
            mdp::BuildMethod(config.methods[m], *inst, eps, config.options);
        if (!mech.ok()) return SolverFailure(mech.status());
        const double build_ms = ElapsedMs(start);
        absl::StatusOr<double> loss = mdp::ExpectedLoss(
            **mech, inst->prior, inst->loss, config.options.threads);
        if (!loss.ok()) return SolverFailure(loss.status());
        mdp::AuditOptions opts;
        opts.eps = eps;
        opts.metric = config.options.metric;
        opts.sample_count = config.audit.samples;
        opts.seed = seed;
        opts.top_k = 0;
        opts.histogram_bins = config.audit.histogram_bins;
        opts.threads = config.options.threads;
        absl::StatusOr<mdp::AuditReport> report =
            mdp::RunAudit(**mech, inst->box, opts);
        if (!report.ok()) return SolverFailure(report.status());
        ResultCell& cell = cells[{m + 1, e}];
        cell.loss.push_back(*loss);
        cell.violation.push_back(report->violation_ratio);
        cell.wall_ms += build_ms;
      }
    }
  }

  std::ostringstream csv;
  const bool replicated = config.replicates > 1;
  if (replicated) {
    csv << "method,eps,utility_loss,utility_loss_ci95,violation_ratio,"
           "violation_ratio_ci95,wall_time_ms\n";
  } else {
    csv << "method,eps,utility_loss,violation_ratio,wall_time_ms\n";
  }
  for (size_t e = 0; e < config.eps.size(); ++e) {
    for (size_t r = 0; r < rows.size(); ++r) {
      const ResultCell& cell = cells[{r, e}];
      const auto [loss, loss_ci] = MeanCi(cell.loss);
      csv << rows[r] << "," << FormatDouble(config.eps[e]) << ","
          << FormatDouble(loss);
      if (replicated) csv << "," << FormatDouble(loss_ci);
      if (cell.violation.empty()) {
        csv << ",NA";
        if (replicated) csv << ",NA";
      } else {
        const auto [viol, viol_ci] = MeanCi(cell.violation);
        csv << "," << FormatDouble(viol);
        if (replicated) csv << "," << FormatDouble(viol_ci);
      }
      csv << ","
          << WallTime(flags.timing,
                      cell.wall_ms / static_cast<double>(config.replicates))
          << "\n";
    }
  }
  OutputSet out(flags.out_dir);
  if (absl::Status s = out.Write("results.csv", csv.str()); !s.ok()) {
    return IoFailure(s);
  }
  if (absl::Status s = out.WriteManifest("compare", config); !s.ok()) {
    return IoFailure(s);
  }
  std::cout << csv.str();
  return std::nullopt;
}

std::optional<Failure> RunLowerBound(const CommonFlags& flags) {
  mdp::RunConfig config;
  if (auto f = ResolveConfig(flags, config)) return f;
  absl::StatusOr<mdp::Instance> inst = LoadInstance(config, config.seed);
  if (!inst.ok()) return SolverFailure(inst.status());
  Json j;
  j["config_hash"] = mdp::ConfigHash(config);
  j["seed"] = config.seed;
  Json entries = Json::array();
  for (double eps : config.eps) {
    absl::StatusOr<double> lb = mdp::InstanceLowerBound(*inst, eps, config.options);
    if (!lb.ok()) return SolverFailure(lb.status());
    entries.push_back({{"eps", eps}, {"lower_bound", *lb}});
    std::cout << absl::StrFormat("eps %g lower_bound %.12g\n", eps, *lb);
  }
  j["bounds"] = entries;
  OutputSet out(flags.out_dir);
  if (absl::Status s = out.Write("lower_bound.json", j.dump(2) + "\n"); !s.ok()) {
    return IoFailure(s);
  }
  if (absl::Status s = out.WriteManifest("lower-bound", config); !s.ok()) {
    return IoFailure(s);
  }
  return std::nullopt;
}

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config");
  cmd->add_option("--seed", flags.seed, "Seed override");
  cmd->add_option("--threads", flags.threads,
                  "Worker threads (default: MDP_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out-dir", flags.out_dir, "Output directory");
  cmd->add_option("--eps", flags.eps_list, "Comma-separated eps values");
  cmd->add_option("--method", flags.methods, "Method tag (repeatable)");
  cmd->add_flag("--timing", flags.timing, "Record wall-clock times");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric-DP perturbation mechanisms: build, audit, compare"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonFlags flags;
  AuditFlags audit_flags;
  CLI::App* synth = app.add_subcommand(
      "synthesize", "Build mechanisms and write them with a run manifest");
  AddCommonFlags(synth, flags);
  CLI::App* audit = app.add_subcommand(
      "audit", "Empirical privacy audit of a mechanism file");
  AddCommonFlags(audit, flags);
  audit->add_option("--mechanism", audit_flags.mechanism_path,
                    "Mechanism JSON file")
      ->required();
  audit->add_option("--samples", audit_flags.samples, "Sampled points");
  CLI::App* compare = app.add_subcommand(
      "compare", "Utility loss and leakage of every method per eps");
  AddCommonFlags(compare, flags);
  CLI::App* lower = app.add_subcommand(
      "lower-bound", "Universal lower bound on expected loss per eps");
  AddCommonFlags(lower, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  std::optional<Failure> failure;
  if (synth->parsed()) {
    failure = RunSynthesize(flags);
  } else if (audit->parsed()) {
    if (!flags.eps_list.empty()) {
      absl::StatusOr<std::vector<double>> eps = ParseEpsList(flags.eps_list);
      if (!eps.ok() || eps->size() != 1) {
        std::cerr << "error: flag --eps: audit takes a single value\n";
        return kConfigError;
      }
      audit_flags.eps = eps->front();
      flags.eps_list.clear();
    }
    failure = RunAuditCommand(flags, audit_flags);
  } else if (compare->parsed()) {
    failure = RunCompare(flags);
  } else {
    failure = RunLowerBound(flags);
  }
  if (failure.has_value()) {
    std::cerr << "error: " << failure->status.message() << "\n";
    return failure->code;
  }
  return kOk;
}
