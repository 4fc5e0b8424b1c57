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

// Experiment configuration: a JSON document with nested sections. Every
// field has a default; unknown keys and ill-typed values are rejected with
// the dotted path of the offending field.
//
//   {
//     "seed": 1,
//     "instance": {"extent_km": [8, 8], "cells": [4, 4], ...},
//     "instance_dir": "",
//     "metric_p": 2,
//     "eps": [0.2, 0.4, ...],
//     "methods": ["AIPO", "EM", ...],
//     "budget": {"mode": "sweep", "resolution": 5, "axis_eps": [],
//                "convention": "half_dual"},
//     "baselines": {"em_factor": 0.5, "tem_radius_km": 0,
//                   "coarse_cells": [2, 2]},
//     "audit": {"samples": 300, "top_k": 10, "histogram_bins": 20},
//     "replicates": 1
//   }

#ifndef MDP_CONFIG_H_
#define MDP_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mdp/pipeline.h"
#include "mdp/synth.h"

namespace mdp {

struct AuditSettings {
  size_t samples = 300;
  size_t top_k = 10;
  size_t histogram_bins = 20;
};

struct RunConfig {
  uint64_t seed = 1;
  SynthSpec instance;
  std::string instance_dir;  // non-empty: load this bundle instead
  std::vector<double> eps = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6};
  std::vector<std::string> methods = {"AIPO", "AIPO-E", "EM",    "Laplace",
                                      "TEM",  "CoarseLP", "RMP-EM"};
  MethodOptions options;
  AuditSettings audit;
  int replicates = 1;
};

// Errors are InvalidArgument with messages of the form "field 'a.b': ...".
absl::StatusOr<RunConfig> ParseConfig(const std::string& text);

// NotFound when the file cannot be read; otherwise as ParseConfig.
absl::StatusOr<RunConfig> LoadConfigFile(const std::string& path);

// Canonical JSON of the full configuration (defaults filled in). Parsing it
// yields an equal configuration.
std::string ConfigToJson(const RunConfig& config);

// 64-bit FNV-1a of the canonical JSON, as 16 lowercase hex digits.
std::string ConfigHash(const RunConfig& config);

}  // namespace mdp

#endif  // MDP_CONFIG_H_
