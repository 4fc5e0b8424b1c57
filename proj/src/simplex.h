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

// Dense two-phase tableau simplex for programs in standard form
//
//   minimize c . x  subject to  A x = b,  x >= 0.
//
// Internal to the library; callers go through SolveLp.

#ifndef MDP_SRC_SIMPLEX_H_
#define MDP_SRC_SIMPLEX_H_

#include <vector>

#include "absl/status/statusor.h"
#include "mdp/lp.h"
#include "mdp/matrix.h"

namespace mdp::internal {

struct StandardForm {
  Matrix a;
  std::vector<double> b;
  std::vector<double> c;
};

struct SimplexResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;               // one entry per column of A
  std::vector<double> reduced_costs;   // final phase-2 reduced costs
  int iterations = 0;
};

inline constexpr double kPivotTolerance = 1e-9;
inline constexpr double kReducedCostTolerance = 1e-9;

// Rows with negative right-hand side are negated internally. Columns that
// already form unit vectors seed the starting basis; the remaining rows get
// artificials and a phase-1 pass. Redundant rows found while driving
// artificials out of the basis are dropped.
absl::StatusOr<SimplexResult> SolveStandardForm(StandardForm problem,
                                                int max_iterations);

}  // namespace mdp::internal

#endif  // MDP_SRC_SIMPLEX_H_
