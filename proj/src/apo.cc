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

#include "mdp/apo.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace mdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckCoefficients(const Matrix& c, size_t rows, size_t outputs) {
  if (outputs == 0) return absl::InvalidArgumentError("no output candidates");
  if (c.rows() != rows || c.cols() != outputs) {
    return absl::InvalidArgumentError(absl::StrCat(
        "coefficient matrix is ", c.rows(), "x", c.cols(), ", expected ", rows,
        "x", outputs));
  }
  for (double v : c.data()) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("coefficients must be finite");
    }
  }
  return absl::OkStatus();
}

// Variables z(k|i) at i * K + k, row sums 1, objective from `c`.
AnchorProgram StochasticRows(const Matrix& c) {
  AnchorProgram prog;
  prog.rows = c.rows();
  prog.outputs = c.cols();
  prog.lp = LinearProgram(static_cast<int>(prog.rows * prog.outputs));
  for (size_t i = 0; i < prog.rows; ++i) {
    for (size_t k = 0; k < prog.outputs; ++k) {
      prog.lp.SetObjective(static_cast<int>(i * prog.outputs + k), c(i, k));
    }
  }
  return prog;
}

void AddRowSums(AnchorProgram& prog) {
  for (size_t i = 0; i < prog.rows; ++i) {
    SparseRow row;
    for (size_t k = 0; k < prog.outputs; ++k) {
      row.Add(static_cast<int>(i * prog.outputs + k), 1.0);
    }
    prog.lp.AddEqual(std::move(row), 1.0);
  }
}

// z(k|a) - e^{log_bound} z(k|b) <= 0 and the mirrored row, for every k.
void AddPairRows(AnchorProgram& prog, size_t a, size_t b, double log_bound) {
  const double factor = std::exp(log_bound);
  const size_t K = prog.outputs;
  for (size_t k = 0; k < K; ++k) {
    const int va = static_cast<int>(a * K + k);
    const int vb = static_cast<int>(b * K + k);
    SparseRow forward;
    forward.Add(va, 1.0);
    forward.Add(vb, -factor);
    prog.lp.AddLessEqual(std::move(forward), 0.0);
    SparseRow backward;
    backward.Add(vb, 1.0);
    backward.Add(va, -factor);
    prog.lp.AddLessEqual(std::move(backward), 0.0);
  }
  prog.bounds.push_back({a, b, log_bound});
  prog.bounds.push_back({b, a, log_bound});
}

absl::Status CheckEps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("privacy budget must be positive and finite, got ", eps));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status PerturbationTable::Validate(double tolerance) const {
  for (size_t i = 0; i < rows(); ++i) {
    double sum = 0.0;
    for (double v : Row(i)) {
      if (!(v >= 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("negative or NaN probability in row ", i));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d sums to %.17g", i, sum));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<BudgetConvention> ParseBudgetConvention(const std::string& s) {
  if (s == "half_dual") return BudgetConvention::kHalfDual;
  if (s == "full_dual") return BudgetConvention::kFullDual;
  if (s == "full_power") return BudgetConvention::kFullPower;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown budget convention '", s,
      "' (expected half_dual, full_dual or full_power)"));
}

std::string BudgetConventionName(BudgetConvention c) {
  switch (c) {
    case BudgetConvention::kHalfDual:
      return "half_dual";
    case BudgetConvention::kFullDual:
      return "full_dual";
    case BudgetConvention::kFullPower:
      return "full_power";
  }
  return "unknown";
}

BudgetSurface SurfaceFor(BudgetConvention c, double total_eps,
                         const Metric& metric) {
  switch (c) {
    case BudgetConvention::kHalfDual:
      return {total_eps / 2.0, metric.DualExponent()};
    case BudgetConvention::kFullDual:
      return {total_eps, metric.DualExponent()};
    case BudgetConvention::kFullPower:
      return {total_eps, metric.p()};
  }
  return {total_eps / 2.0, metric.DualExponent()};
}

BudgetReport CheckBudget(const BudgetVector& budget) {
  BudgetReport r;
  const BudgetSurface s =
      SurfaceFor(budget.convention, budget.total_eps, budget.metric);
  bool sane = budget.total_eps > 0.0 && std::isfinite(budget.total_eps) &&
              !budget.eps.empty();
  for (double e : budget.eps) sane = sane && e >= 0.0 && std::isfinite(e);
  if (std::isinf(s.exponent)) {
    for (double e : budget.eps) r.lhs = std::max(r.lhs, e);
    r.rhs = s.radius;
  } else {
    for (double e : budget.eps) r.lhs += std::pow(e, s.exponent);
    r.rhs = std::pow(s.radius, s.exponent);
  }
  r.slack = r.rhs - r.lhs;
  r.ok = sane && r.lhs <= r.rhs + kBudgetTolerance;
  return r;
}

double EffectiveEps(const BudgetVector& budget) {
  return LpNorm(budget.eps, budget.metric.DualExponent());
}

absl::StatusOr<Matrix> SurrogateCoefficients(const Partition& partition,
                                             const PriorModel& prior,
                                             const Matrix& loss) {
  if (prior.points.size() != prior.mass.size()) {
    return absl::InvalidArgumentError("prior points and masses disagree");
  }
  if (loss.rows() != prior.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "loss matrix has ", loss.rows(), " rows for ", prior.size(),
        " prior points"));
  }
  const size_t K = loss.cols();
  Matrix c(partition.num_anchors(), K, 0.0);
  for (size_t s = 0; s < prior.size(); ++s) {
    absl::StatusOr<size_t> cell = partition.LocateCell(prior.points[s]);
    if (!cell.ok()) return cell.status();
    absl::StatusOr<CellWeights> w =
        InterpolationWeights(partition.GetCell(*cell), prior.points[s]);
    if (!w.ok()) return w.status();
    for (uint32_t g = 0; g < partition.corners_per_cell(); ++g) {
      const double weight = w->Weight(g) * prior.mass[s];
      if (weight == 0.0) continue;
      const size_t anchor = partition.CornerAnchor(*cell, g);
      for (size_t k = 0; k < K; ++k) c(anchor, k) += weight * loss(s, k);
    }
  }
  return c;
}

absl::StatusOr<AnchorProgram> BuildApproxApo(const Partition& partition,
                                             size_t num_outputs,
                                             const BudgetVector& budget,
                                             const Matrix& coefficients) {
  if (budget.eps.size() != partition.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "budget has ", budget.eps.size(), " axes, partition has ",
        partition.dim()));
  }
  const BudgetReport report = CheckBudget(budget);
  if (!report.ok) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "per-axis budgets violate the %s composition rule (%.17g > %.17g)",
        BudgetConventionName(budget.convention), report.lhs, report.rhs));
  }
  if (absl::Status s = CheckCoefficients(coefficients, partition.num_anchors(),
                                         num_outputs);
      !s.ok()) {
    return s;
  }
  AnchorProgram prog = StochasticRows(coefficients);
  for (const AnchorEdge& e : AxisNeighbors(partition)) {
    AddPairRows(prog, e.a, e.b, budget.eps[e.axis] * e.gap);
  }
  AddRowSums(prog);
  return prog;
}

absl::StatusOr<AnchorProgram> BuildAipoRelaxed(const Partition& partition,
                                               size_t num_outputs,
                                               double total_eps,
                                               const Metric& metric,
                                               const Matrix& coefficients) {
  if (absl::Status s = CheckEps(total_eps); !s.ok()) return s;
  if (absl::Status s = CheckCoefficients(coefficients, partition.num_anchors(),
                                         num_outputs);
      !s.ok()) {
    return s;
  }
  AnchorProgram prog = StochasticRows(coefficients);
  std::vector<Point> anchors;
  for (size_t a = 0; a < partition.num_anchors(); ++a) {
    anchors.push_back(partition.Anchor(a));
  }
  for (size_t a = 0; a < anchors.size(); ++a) {
    for (size_t b = a + 1; b < anchors.size(); ++b) {
      const double d =
          LpDistanceUnchecked(anchors[a].coords(), anchors[b].coords(), metric);
      AddPairRows(prog, a, b, total_eps * d);
    }
  }
  AddRowSums(prog);
  return prog;
}

absl::StatusOr<AnchorProgram> BuildCoarseLp(
    const std::vector<Point>& representatives, const std::vector<double>& mass,
    const Matrix& loss, double total_eps, const Metric& metric) {
  if (absl::Status s = CheckEps(total_eps); !s.ok()) return s;
  if (representatives.empty() || mass.size() != representatives.size()) {
    return absl::InvalidArgumentError(
        "need at least one representative and one mass per representative");
  }
  if (absl::Status s =
          CheckCoefficients(loss, representatives.size(), loss.cols());
      !s.ok()) {
    return s;
  }
  for (size_t a = 0; a < representatives.size(); ++a) {
    for (size_t b = 0; b < a; ++b) {
      if (representatives[a] == representatives[b]) {
        return absl::InvalidArgumentError(
            absl::StrCat("representatives ", b, " and ", a, " coincide"));
      }
    }
  }
  Matrix c(loss.rows(), loss.cols());
  for (size_t i = 0; i < c.rows(); ++i) {
    for (size_t k = 0; k < c.cols(); ++k) c(i, k) = mass[i] * loss(i, k);
  }
  AnchorProgram prog = StochasticRows(c);
  for (size_t a = 0; a < representatives.size(); ++a) {
    for (size_t b = a + 1; b < representatives.size(); ++b) {
      absl::StatusOr<double> d =
          LpDistance(representatives[a], representatives[b], metric);
      if (!d.ok()) return d.status();
      AddPairRows(prog, a, b, total_eps * *d);
    }
  }
  AddRowSums(prog);
  return prog;
}

absl::StatusOr<SolvedTable> SolveAnchorProgram(const AnchorProgram& program,
                                               const LpOptions& options) {
  absl::StatusOr<LpSolution> sol = SolveLp(program.lp, options);
  if (!sol.ok()) return sol.status();
  if (sol->status != LpStatus::kOptimal) {
    return absl::InternalError(absl::StrCat(
        "anchor program reported ", LpStatusName(sol->status),
        "; the uniform table is always feasible"));
  }
  const size_t K = program.outputs;
  Matrix z(program.rows, K);
  for (size_t i = 0; i < program.rows; ++i) {
    double sum = 0.0;
    for (size_t k = 0; k < K; ++k) {
      double v = sol->values[i * K + k];
      if (v < 0.0 || std::abs(v) < 1e-14) v = 0.0;
      z(i, k) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kLpFeasibilityTolerance) {
      return absl::InternalError(
          absl::StrFormat("row %d of the solved table sums to %.17g", i, sum));
    }
    for (size_t k = 0; k < K; ++k) z(i, k) /= sum;
  }
  // Floor, then restore every log bound exactly: a shortest-path relaxation
  // over the constraint graph in log space. All bounds are non-negative, so it
  // settles within `rows` sweeps.
  Matrix logz(program.rows, K);
  for (size_t i = 0; i < program.rows; ++i) {
    for (size_t k = 0; k < K; ++k) {
      logz(i, k) = std::log(std::max(z(i, k), kProbabilityFloor));
    }
  }
  bool changed = true;
  for (size_t sweep = 0; changed && sweep <= program.rows; ++sweep) {
    changed = false;
    for (const LogBound& b : program.bounds) {
      for (size_t k = 0; k < K; ++k) {
        const double cap = logz(b.to, k) + b.log_bound;
        if (logz(b.from, k) > cap) {
          logz(b.from, k) = cap;
          changed = true;
        }
      }
    }
  }
  for (size_t i = 0; i < program.rows; ++i) {
    double sum = 0.0;
    for (size_t k = 0; k < K; ++k) {
      z(i, k) = std::exp(logz(i, k));
      sum += z(i, k);
    }
    for (size_t k = 0; k < K; ++k) z(i, k) /= sum;
  }
  SolvedTable out;
  out.table = PerturbationTable(std::move(z));
  out.objective = sol->objective_value;
  out.iterations = sol->iterations;
  return out;
}

absl::StatusOr<double> SolveCellLowerBound(const Matrix& cell_costs,
                                           const Matrix& max_distance,
                                           double total_eps, double volume,
                                           const LpOptions& options) {
  if (absl::Status s = CheckEps(total_eps); !s.ok() && total_eps != 0.0) {
    return s;
  }
  const size_t M = cell_costs.rows();
  if (M == 0 || max_distance.rows() != M || max_distance.cols() != M) {
    return absl::InvalidArgumentError(
        "cell costs and cell distances must cover the same non-empty cells");
  }
  if (!(volume > 0.0)) {
    return absl::InvalidArgumentError("cell volume must be positive");
  }
  if (absl::Status s = CheckCoefficients(cell_costs, M, cell_costs.cols());
      !s.ok()) {
    return s;
  }
  AnchorProgram prog = StochasticRows(cell_costs);
  for (size_t a = 0; a < M; ++a) {
    for (size_t b = a + 1; b < M; ++b) {
      AddPairRows(prog, a, b, total_eps * max_distance(a, b));
    }
  }
  for (size_t i = 0; i < M; ++i) {
    SparseRow row;
    for (size_t k = 0; k < prog.outputs; ++k) {
      row.Add(static_cast<int>(i * prog.outputs + k), 1.0);
    }
    prog.lp.AddEqual(std::move(row), volume);
  }
  absl::StatusOr<LpSolution> sol = SolveLp(prog.lp, options);
  if (!sol.ok()) return sol.status();
  if (sol->status != LpStatus::kOptimal) {
    return absl::InternalError(absl::StrCat("lower-bound program reported ",
                                            LpStatusName(sol->status)));
  }
  return sol->objective_value;
}

absl::StatusOr<double> LowerBound(const Partition& partition,
                                  const PriorModel& prior, const Matrix& loss,
                                  double total_eps, const Metric& metric,
                                  const LpOptions& options) {
  if (absl::Status s = CheckEps(total_eps); !s.ok()) return s;
  if (loss.rows() != prior.size() || prior.mass.size() != prior.size()) {
    return absl::InvalidArgumentError("prior and loss matrix disagree");
  }
  const size_t K = loss.cols();
  std::vector<int> count(partition.num_cells(), 0);
  Matrix min_cost(partition.num_cells(), K, kInf);
  for (size_t s = 0; s < prior.size(); ++s) {
    absl::StatusOr<size_t> cell = partition.LocateCell(prior.points[s]);
    if (!cell.ok()) return cell.status();
    ++count[*cell];
    for (size_t k = 0; k < K; ++k) {
      min_cost(*cell, k) =
          std::min(min_cost(*cell, k), prior.mass[s] * loss(s, k));
    }
  }
  std::vector<size_t> used;
  for (size_t m = 0; m < partition.num_cells(); ++m) {
    if (count[m] > 0) used.push_back(m);
  }
  Matrix costs(used.size(), K);
  Matrix dist(used.size(), used.size(), 0.0);
  for (size_t a = 0; a < used.size(); ++a) {
    for (size_t k = 0; k < K; ++k) {
      costs(a, k) = count[used[a]] * min_cost(used[a], k);
    }
    for (size_t b = 0; b < used.size(); ++b) {
      dist(a, b) = MaxCellDistance(partition.GetCell(used[a]),
                                   partition.GetCell(used[b]), metric);
    }
  }
  return SolveCellLowerBound(costs, dist, total_eps, 1.0, options);
}

}  // namespace mdp
