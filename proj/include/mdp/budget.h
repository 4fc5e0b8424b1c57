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

// Per-axis budget allocation: equal split, arc sampling of the composition
// surface and the loss-minimizing sweep.

#ifndef MDP_BUDGET_H_
#define MDP_BUDGET_H_

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdp/apo.h"
#include "mdp/geometry.h"

namespace mdp {

// Identical per-axis budgets that saturate the composition surface.
absl::StatusOr<BudgetVector> EqualSplit(
    double total_eps, const Metric& metric, size_t dims,
    BudgetConvention convention = BudgetConvention::kHalfDual);

// Two-axis allocations on the composition surface: eps_1 at i * r / (n + 1)
// for i = 1..n with r the surface radius, eps_2 solved from the surface, plus
// every mirror and the exact equal split. Sorted by eps_1, near-duplicates
// (within 1e-12) collapsed.
absl::StatusOr<std::vector<BudgetVector>> FeasibleAllocations(
    double total_eps, const Metric& metric, size_t dims, int resolution,
    BudgetConvention convention = BudgetConvention::kHalfDual);

struct AllocationPoint {
  BudgetVector budget;
  bool ok = false;
  double loss = 0.0;
  std::string error;
};

struct AllocationResult {
  BudgetVector best;
  double best_loss = 0.0;
  std::vector<AllocationPoint> curve;  // sorted by eps_1
};

using AllocationEvaluator =
    std::function<absl::StatusOr<double>(const BudgetVector&)>;

// Evaluates every candidate (concurrently when threads > 1) and returns the
// smallest loss, ties going to the smaller eps_1. Failed candidates are kept
// in the curve with their error and skipped; all failing is an error.
absl::StatusOr<AllocationResult> OptimizeAllocation(
    std::vector<BudgetVector> candidates, const AllocationEvaluator& evaluate,
    int threads = 1);

// CSV with columns eps1,eps2,loss for the successful candidates.
void WriteLossCurveCsv(const std::vector<AllocationPoint>& curve,
                       std::ostream& out);

}  // namespace mdp

#endif  // MDP_BUDGET_H_
