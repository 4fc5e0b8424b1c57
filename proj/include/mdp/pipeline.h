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

// End-to-end construction of every compared method on an instance.

#ifndef MDP_PIPELINE_H_
#define MDP_PIPELINE_H_

#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdp/apo.h"
#include "mdp/budget.h"
#include "mdp/interpolation.h"
#include "mdp/lp.h"
#include "mdp/model.h"
#include "mdp/synth.h"

namespace mdp {

enum class BudgetMode { kSweep, kEqual, kExplicit };

absl::StatusOr<BudgetMode> ParseBudgetMode(const std::string& s);
std::string BudgetModeName(BudgetMode mode);

struct MethodOptions {
  Metric metric = Metric::L2();
  BudgetMode budget_mode = BudgetMode::kSweep;
  int sweep_resolution = 5;
  std::vector<double> explicit_eps;  // per axis, for kExplicit
  BudgetConvention convention = BudgetConvention::kHalfDual;
  double em_factor = 0.5;
  double tem_radius = 0.0;  // <= 0 selects 3 / eps
  std::vector<int> coarse_cells = {2, 2};
  int threads = 1;
  LpOptions lp;
};

struct AipoResult {
  std::shared_ptr<const InterpolatedMechanism> mechanism;
  BudgetVector budget;
  double loss = 0.0;
  std::vector<AllocationPoint> curve;  // filled in sweep mode
};

// Interpolated anchor mechanism for one per-axis budget.
absl::StatusOr<std::shared_ptr<const InterpolatedMechanism>> SolveAipoTable(
    const Instance& instance, const Matrix& coefficients,
    const BudgetVector& budget, const std::string& name,
    const LpOptions& lp = {});

// AIPO with the budget chosen per options.budget_mode. The sweep scores each
// candidate by the exact expected loss of its interpolated mechanism.
absl::StatusOr<AipoResult> BuildAipo(const Instance& instance, double eps,
                                     const MethodOptions& options);

// Method tags: AIPO, AIPO-E, AIPO-R, EM, Laplace, TEM, CoarseLP and
// RMP-<tag> for the remapped version of any of them.
absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> BuildMethod(
    const std::string& tag, const Instance& instance, double eps,
    const MethodOptions& options);

std::vector<std::string> BaseMethodTags();

absl::StatusOr<double> InstanceLowerBound(const Instance& instance, double eps,
                                          const MethodOptions& options);

}  // namespace mdp

#endif  // MDP_PIPELINE_H_
