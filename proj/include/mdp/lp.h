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

// Sparse linear-program model and the embedded simplex solver behind it.
//
//   minimize    c . x
//   subject to  A_ub x <= b_ub
//               A_eq x  = b_eq
//               lo <= x <= hi        (lo finite, hi possibly +inf)

#ifndef MDP_LP_H_
#define MDP_LP_H_

#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mdp {

inline constexpr double kLpFeasibilityTolerance = 1e-7;
inline constexpr double kLpOptimalityTolerance = 1e-8;

// A constraint row in coordinate form. Zero coefficients are never stored.
struct SparseRow {
  std::vector<std::pair<int, double>> entries;

  void Add(int var, double coeff) {
    if (coeff != 0.0) entries.emplace_back(var, coeff);
  }
};

class LinearProgram {
 public:
  explicit LinearProgram(int num_vars = 0);

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_inequalities() const { return static_cast<int>(ub_rows_.size()); }
  int num_equalities() const { return static_cast<int>(eq_rows_.size()); }

  void SetObjective(int var, double coeff) { objective_[var] = coeff; }
  void SetBounds(int var, double lo, double hi) {
    lower_[var] = lo;
    upper_[var] = hi;
  }

  // Rows are stored as given minus explicit zeros. Degenerate equality rows
  // (no coefficients, zero right-hand side) are dropped; the return value is
  // false when that happens.
  bool AddLessEqual(SparseRow row, double rhs);
  bool AddEqual(SparseRow row, double rhs);

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<SparseRow>& ub_rows() const { return ub_rows_; }
  const std::vector<double>& ub_rhs() const { return ub_rhs_; }
  const std::vector<SparseRow>& eq_rows() const { return eq_rows_; }
  const std::vector<double>& eq_rhs() const { return eq_rhs_; }

  // Checks dimensions, finiteness and variable indices.
  absl::Status Validate() const;

  // Maximum violation of rows and bounds by x.
  double MaxViolation(const std::vector<double>& x) const;
  // Same, with each row's violation divided by max(1, |rhs|, max |a_ij|).
  double MaxScaledViolation(const std::vector<double>& x) const;
  double ObjectiveValue(const std::vector<double>& x) const;

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<SparseRow> ub_rows_;
  std::vector<double> ub_rhs_;
  std::vector<SparseRow> eq_rows_;
  std::vector<double> eq_rhs_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  int iterations = 0;
};

// Which program the tableau simplex works on. kAuto picks the smaller
// tableau; kDual solves the dual and reads the primal off its multipliers.
enum class LpRoute { kAuto, kPrimal, kDual };

struct LpOptions {
  LpRoute route = LpRoute::kAuto;
  int max_iterations = 0;  // 0 = size-based default
};

// Infeasible and unbounded programs are reported through the status field.
// Errors are returned only for malformed programs or numerical breakdown.
absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp,
                                   const LpOptions& options = {});

// Fixed-column MPS dump for cross-checking against external solvers.
void WriteMps(const LinearProgram& lp, const std::string& name,
              std::ostream& out);

}  // namespace mdp

#endif  // MDP_LP_H_
