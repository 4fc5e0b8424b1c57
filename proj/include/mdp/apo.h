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

// Anchor perturbation programs: the per-axis-budget program over anchor
// neighbors, its all-pairs relaxation, the coarse representative LP and the
// cell-aggregated lower bound.

#ifndef MDP_APO_H_
#define MDP_APO_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mdp/geometry.h"
#include "mdp/lp.h"
#include "mdp/matrix.h"
#include "mdp/model.h"

namespace mdp {

// Row-stochastic table z(y_k | row_i).
class PerturbationTable {
 public:
  PerturbationTable() = default;
  explicit PerturbationTable(Matrix probs) : probs_(std::move(probs)) {}

  size_t rows() const { return probs_.rows(); }
  size_t cols() const { return probs_.cols(); }
  double operator()(size_t i, size_t k) const { return probs_(i, k); }
  std::span<const double> Row(size_t i) const { return probs_.Row(i); }
  const Matrix& matrix() const { return probs_; }

  // Entries non-negative, rows summing to 1 within `tolerance`.
  absl::Status Validate(double tolerance = 1e-9) const;

 private:
  Matrix probs_;
};

// How per-axis budgets compose into the total. kHalfDual is normative:
// sum eps_l^q <= (eps/2)^q with q the dual exponent. kFullDual drops the
// factor 2; kFullPower uses sum eps_l^p <= eps^p.
enum class BudgetConvention { kHalfDual, kFullDual, kFullPower };

absl::StatusOr<BudgetConvention> ParseBudgetConvention(const std::string& s);
std::string BudgetConventionName(BudgetConvention c);

struct BudgetVector {
  std::vector<double> eps;  // per axis, 1 / domain unit
  double total_eps = 0.0;
  Metric metric = Metric::L2();
  BudgetConvention convention = BudgetConvention::kHalfDual;
};

// The composition surface sum_l eps_l^exponent <= radius^exponent, or
// max_l eps_l <= radius when exponent is +inf.
struct BudgetSurface {
  double radius = 0.0;
  double exponent = 2.0;
};

BudgetSurface SurfaceFor(BudgetConvention c, double total_eps,
                         const Metric& metric);

struct BudgetReport {
  bool ok = false;
  double lhs = 0.0;  // sum eps_l^r, or max eps_l
  double rhs = 0.0;  // radius^r, or radius
  double slack = 0.0;  // rhs - lhs
};

inline constexpr double kBudgetTolerance = 1e-12;

BudgetReport CheckBudget(const BudgetVector& budget);

// Lipschitz constant of the unnormalized interpolant: the dual-exponent norm
// of the per-axis budgets.
double EffectiveEps(const BudgetVector& budget);

// c(anchor, k) = sum over samples of w_corner(x) p(x) L(x, y_k), accumulated
// over every cell incident to the anchor.
absl::StatusOr<Matrix> SurrogateCoefficients(const Partition& partition,
                                             const PriorModel& prior,
                                             const Matrix& loss);

// ln z(k|from) <= ln z(k|to) + log_bound for every output k.
struct LogBound {
  size_t from = 0;
  size_t to = 0;
  double log_bound = 0.0;
};

// A program over z(k|row) with variable index row * K + k.
struct AnchorProgram {
  LinearProgram lp;
  size_t rows = 0;
  size_t outputs = 0;
  std::vector<LogBound> bounds;  // both directions listed
};

absl::StatusOr<AnchorProgram> BuildApproxApo(const Partition& partition,
                                             size_t num_outputs,
                                             const BudgetVector& budget,
                                             const Matrix& coefficients);

absl::StatusOr<AnchorProgram> BuildAipoRelaxed(const Partition& partition,
                                               size_t num_outputs,
                                               double total_eps,
                                               const Metric& metric,
                                               const Matrix& coefficients);

// Objective mass_i * loss(i, k); all representative pairs constrained by
// exp(eps * d_p).
absl::StatusOr<AnchorProgram> BuildCoarseLp(
    const std::vector<Point>& representatives, const std::vector<double>& mass,
    const Matrix& loss, double total_eps, const Metric& metric);

struct SolvedTable {
  PerturbationTable table;
  double objective = 0.0;  // LP optimum before post-processing
  int iterations = 0;
};

inline constexpr double kProbabilityFloor = 1e-12;

// Solves, then cleans the table: negatives and |z| < 1e-14 to zero, rows
// renormalized (pre-pass deviation must stay under 1e-7), entries floored at
// kProbabilityFloor, the log bounds re-imposed exactly by relaxation, and
// rows renormalized once more.
absl::StatusOr<SolvedTable> SolveAnchorProgram(const AnchorProgram& program,
                                               const LpOptions& options = {});

// Cell-level relaxation: variables z(k|m), z(k|m) <= exp(eps * dmax(m, m'))
// z(k|m') for every cell pair, sum_k z(k|m) = volume, objective
// sum cell_costs(m, k) z(k|m). Returns the optimal value.
absl::StatusOr<double> SolveCellLowerBound(const Matrix& cell_costs,
                                           const Matrix& max_distance,
                                           double total_eps, double volume,
                                           const LpOptions& options = {});

// Lower bound on the expected loss of any eps-mDP mechanism evaluated on the
// prior samples. Cells without samples are skipped; each remaining cell m
// contributes n_m * min_{s in m} p(s) L(s, k) per unit of its averaged
// column.
absl::StatusOr<double> LowerBound(const Partition& partition,
                                  const PriorModel& prior, const Matrix& loss,
                                  double total_eps, const Metric& metric,
                                  const LpOptions& options = {});

}  // namespace mdp

#endif  // MDP_APO_H_
