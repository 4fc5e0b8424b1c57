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

#include "mdp/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"

namespace mdp {
namespace {

using Json = nlohmann::ordered_json;

absl::Status FieldError(const std::string& path, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat("field '", path, "': ", what));
}

std::string Join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : absl::StrCat(prefix, ".", key);
}

// Field readers leave `out` untouched when the key is absent.
class Section {
 public:
  Section(const Json& obj, std::string path)
      : obj_(obj), path_(std::move(path)) {}

  absl::Status CheckKeys(const std::set<std::string>& allowed) const {
    if (!obj_.is_object()) return FieldError(path_, "expected an object");
    for (const auto& item : obj_.items()) {
      if (!allowed.contains(item.key())) {
        return FieldError(Join(path_, item.key()), "unknown key");
      }
    }
    return absl::OkStatus();
  }

  bool Has(const std::string& key) const { return obj_.contains(key); }
  const Json& Get(const std::string& key) const { return obj_[key]; }
  std::string Path(const std::string& key) const { return Join(path_, key); }

  absl::Status Double(const std::string& key, double& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = Get(key);
    if (!v.is_number()) return FieldError(Path(key), "expected a number");
    out = v.get<double>();
    return absl::OkStatus();
  }

  template <typename Int>
  absl::Status Integer(const std::string& key, Int& out,
                       long long min_value) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = Get(key);
    if (!v.is_number_integer()) {
      return FieldError(Path(key), "expected an integer");
    }
    const long long x = v.get<long long>();
    if (x < min_value) {
      return FieldError(Path(key), absl::StrCat("must be >= ", min_value));
    }
    out = static_cast<Int>(x);
    return absl::OkStatus();
  }

  absl::Status String(const std::string& key, std::string& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = Get(key);
    if (!v.is_string()) return FieldError(Path(key), "expected a string");
    out = v.get<std::string>();
    return absl::OkStatus();
  }

  absl::Status Doubles(const std::string& key, std::vector<double>& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = Get(key);
    if (!v.is_array()) return FieldError(Path(key), "expected an array");
    std::vector<double> values;
    for (const Json& e : v) {
      if (!e.is_number()) {
        return FieldError(Path(key), "expected an array of numbers");
      }
      values.push_back(e.get<double>());
    }
    out = std::move(values);
    return absl::OkStatus();
  }

  absl::Status Strings(const std::string& key,
                       std::vector<std::string>& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = Get(key);
    if (!v.is_array()) return FieldError(Path(key), "expected an array");
    std::vector<std::string> values;
    for (const Json& e : v) {
      if (!e.is_string()) {
        return FieldError(Path(key), "expected an array of strings");
      }
      values.push_back(e.get<std::string>());
    }
    out = std::move(values);
    return absl::OkStatus();
  }

  absl::Status IntPair(const std::string& key, int& a, int& b) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = Get(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer()) {
      return FieldError(Path(key), "expected two integers");
    }
    if (v[0].get<long long>() < 1 || v[1].get<long long>() < 1) {
      return FieldError(Path(key), "entries must be >= 1");
    }
    a = v[0].get<int>();
    b = v[1].get<int>();
    return absl::OkStatus();
  }

 private:
  const Json& obj_;
  std::string path_;
};

#define MDP_RETURN_IF_ERROR(expr)            \
  do {                                       \
    if (absl::Status s_ = (expr); !s_.ok()) { \
      return s_;                             \
    }                                        \
  } while (0)

absl::Status ParseInstance(const Section& sec, SynthSpec& spec) {
  MDP_RETURN_IF_ERROR(sec.CheckKeys(
      {"extent_km", "cells", "samples_per_cell_axis", "graph_nodes_per_axis",
       "edge_jitter", "hotspots", "hotspot_sigma_km", "hotspot_weight",
       "outputs_per_axis", "tasks"}));
  if (sec.Has("extent_km")) {
    std::vector<double> e;
    MDP_RETURN_IF_ERROR(sec.Doubles("extent_km", e));
    if (e.size() != 2 || !(e[0] > 0.0) || !(e[1] > 0.0) ||
        !std::isfinite(e[0]) || !std::isfinite(e[1])) {
      return FieldError(sec.Path("extent_km"), "expected two positive numbers");
    }
    spec.extent_x = e[0];
    spec.extent_y = e[1];
  }
  MDP_RETURN_IF_ERROR(sec.IntPair("cells", spec.cells_x, spec.cells_y));
  MDP_RETURN_IF_ERROR(
      sec.Integer("samples_per_cell_axis", spec.samples_per_cell_axis, 1));
  MDP_RETURN_IF_ERROR(
      sec.Integer("graph_nodes_per_axis", spec.graph_nodes_per_axis, 2));
  MDP_RETURN_IF_ERROR(sec.Double("edge_jitter", spec.edge_jitter));
  if (!(spec.edge_jitter >= 0.0)) {
    return FieldError(sec.Path("edge_jitter"), "must be >= 0");
  }
  MDP_RETURN_IF_ERROR(sec.Integer("hotspots", spec.hotspots, 0));
  MDP_RETURN_IF_ERROR(sec.Double("hotspot_sigma_km", spec.hotspot_sigma));
  if (!(spec.hotspot_sigma > 0.0)) {
    return FieldError(sec.Path("hotspot_sigma_km"), "must be > 0");
  }
  MDP_RETURN_IF_ERROR(sec.Double("hotspot_weight", spec.hotspot_weight));
  if (!(spec.hotspot_weight >= 0.0)) {
    return FieldError(sec.Path("hotspot_weight"), "must be >= 0");
  }
  MDP_RETURN_IF_ERROR(sec.Integer("outputs_per_axis", spec.outputs_per_axis, 1));
  MDP_RETURN_IF_ERROR(sec.Integer("tasks", spec.tasks, 1));
  return absl::OkStatus();
}

absl::Status ParseBudget(const Section& sec, MethodOptions& options) {
  MDP_RETURN_IF_ERROR(
      sec.CheckKeys({"mode", "resolution", "axis_eps", "convention"}));
  std::string mode = BudgetModeName(options.budget_mode);
  MDP_RETURN_IF_ERROR(sec.String("mode", mode));
  absl::StatusOr<BudgetMode> m = ParseBudgetMode(mode);
  if (!m.ok()) return FieldError(sec.Path("mode"), std::string(m.status().message()));
  options.budget_mode = *m;
  MDP_RETURN_IF_ERROR(sec.Integer("resolution", options.sweep_resolution, 1));
  MDP_RETURN_IF_ERROR(sec.Doubles("axis_eps", options.explicit_eps));
  for (double e : options.explicit_eps) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      return FieldError(sec.Path("axis_eps"), "entries must be positive");
    }
  }
  if (options.budget_mode == BudgetMode::kExplicit &&
      options.explicit_eps.size() != 2) {
    return FieldError(sec.Path("axis_eps"),
                      "explicit mode needs one budget per axis (2)");
  }
  std::string conv = BudgetConventionName(options.convention);
  MDP_RETURN_IF_ERROR(sec.String("convention", conv));
  absl::StatusOr<BudgetConvention> c = ParseBudgetConvention(conv);
  if (!c.ok()) {
    return FieldError(sec.Path("convention"), std::string(c.status().message()));
  }
  options.convention = *c;
  return absl::OkStatus();
}

absl::Status ParseBaselines(const Section& sec, MethodOptions& options) {
  MDP_RETURN_IF_ERROR(
      sec.CheckKeys({"em_factor", "tem_radius_km", "coarse_cells"}));
  MDP_RETURN_IF_ERROR(sec.Double("em_factor", options.em_factor));
  if (!(options.em_factor > 0.0)) {
    return FieldError(sec.Path("em_factor"), "must be > 0");
  }
  MDP_RETURN_IF_ERROR(sec.Double("tem_radius_km", options.tem_radius));
  if (!std::isfinite(options.tem_radius)) {
    return FieldError(sec.Path("tem_radius_km"), "must be finite");
  }
  options.coarse_cells.resize(2);
  MDP_RETURN_IF_ERROR(sec.IntPair("coarse_cells", options.coarse_cells[0],
                                  options.coarse_cells[1]));
  return absl::OkStatus();
}

absl::Status ParseAudit(const Section& sec, AuditSettings& audit) {
  MDP_RETURN_IF_ERROR(sec.CheckKeys({"samples", "top_k", "histogram_bins"}));
  MDP_RETURN_IF_ERROR(sec.Integer("samples", audit.samples, 2));
  MDP_RETURN_IF_ERROR(sec.Integer("top_k", audit.top_k, 0));
  MDP_RETURN_IF_ERROR(sec.Integer("histogram_bins", audit.histogram_bins, 1));
  return absl::OkStatus();
}

Json MetricJson(const Metric& m) {
  if (m.is_infinite()) return "inf";
  return m.p();
}

}  // namespace

absl::StatusOr<RunConfig> ParseConfig(const std::string& text) {
  Json root = Json::parse(text, nullptr, /*allow_exceptions=*/false,
                          /*ignore_comments=*/true);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("config is not valid JSON");
  }
  RunConfig config;
  const Section top(root, "");
  MDP_RETURN_IF_ERROR(top.CheckKeys(
      {"seed", "instance", "instance_dir", "metric_p", "eps", "methods",
       "budget", "baselines", "audit", "replicates"}));
  MDP_RETURN_IF_ERROR(top.Integer("seed", config.seed, 0));
  if (top.Has("instance")) {
    MDP_RETURN_IF_ERROR(
        ParseInstance(Section(top.Get("instance"), "instance"), config.instance));
  }
  MDP_RETURN_IF_ERROR(top.String("instance_dir", config.instance_dir));
  if (top.Has("metric_p")) {
    const Json& v = top.Get("metric_p");
    if (v.is_string() && v.get<std::string>() == "inf") {
      config.options.metric = Metric::LInf();
    } else if (v.is_number()) {
      absl::StatusOr<Metric> m = Metric::Create(v.get<double>());
      if (!m.ok()) return FieldError("metric_p", std::string(m.status().message()));
      config.options.metric = *m;
    } else {
      return FieldError("metric_p", "expected a number or \"inf\"");
    }
  }
  MDP_RETURN_IF_ERROR(top.Doubles("eps", config.eps));
  if (config.eps.empty()) return FieldError("eps", "must not be empty");
  for (double e : config.eps) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      return FieldError("eps", "entries must be positive and finite");
    }
  }
  MDP_RETURN_IF_ERROR(top.Strings("methods", config.methods));
  if (config.methods.empty()) return FieldError("methods", "must not be empty");
  if (top.Has("budget")) {
    MDP_RETURN_IF_ERROR(
        ParseBudget(Section(top.Get("budget"), "budget"), config.options));
  }
  if (top.Has("baselines")) {
    MDP_RETURN_IF_ERROR(ParseBaselines(Section(top.Get("baselines"), "baselines"),
                                       config.options));
  }
  if (top.Has("audit")) {
    MDP_RETURN_IF_ERROR(ParseAudit(Section(top.Get("audit"), "audit"), config.audit));
  }
  MDP_RETURN_IF_ERROR(top.Integer("replicates", config.replicates, 1));
  config.instance.seed = config.seed;
  return config;
}

absl::StatusOr<RunConfig> LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

std::string ConfigToJson(const RunConfig& c) {
  Json j;
  j["seed"] = c.seed;
  const SynthSpec& s = c.instance;
  j["instance"] = {{"extent_km", {s.extent_x, s.extent_y}},
                   {"cells", {s.cells_x, s.cells_y}},
                   {"samples_per_cell_axis", s.samples_per_cell_axis},
                   {"graph_nodes_per_axis", s.graph_nodes_per_axis},
                   {"edge_jitter", s.edge_jitter},
                   {"hotspots", s.hotspots},
                   {"hotspot_sigma_km", s.hotspot_sigma},
                   {"hotspot_weight", s.hotspot_weight},
                   {"outputs_per_axis", s.outputs_per_axis},
                   {"tasks", s.tasks}};
  j["instance_dir"] = c.instance_dir;
  j["metric_p"] = MetricJson(c.options.metric);
  j["eps"] = c.eps;
  j["methods"] = c.methods;
  j["budget"] = {{"mode", BudgetModeName(c.options.budget_mode)},
                 {"resolution", c.options.sweep_resolution},
                 {"axis_eps", c.options.explicit_eps},
                 {"convention", BudgetConventionName(c.options.convention)}};
  j["baselines"] = {{"em_factor", c.options.em_factor},
                    {"tem_radius_km", c.options.tem_radius},
                    {"coarse_cells", c.options.coarse_cells}};
  j["audit"] = {{"samples", c.audit.samples},
                {"top_k", c.audit.top_k},
                {"histogram_bins", c.audit.histogram_bins}};
  j["replicates"] = c.replicates;
  return j.dump(2) + "\n";
}

std::string ConfigHash(const RunConfig& config) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : ConfigToJson(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return absl::StrFormat("%016x", h);
}

}  // namespace mdp
