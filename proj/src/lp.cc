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

#include "mdp/lp.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mdp/matrix.h"
#include "simplex.h"

namespace mdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The program after shifting x = lo + x' and turning finite upper bounds into
// inequality rows:  min c.x'  s.t.  A x' <= b,  E x' = e,  x' >= 0.
struct ShiftedProgram {
  std::vector<SparseRow> a;
  std::vector<double> b;
  std::vector<SparseRow> e_rows;
  std::vector<double> e;
  std::vector<double> c;
  size_t n = 0;
};

double RowDot(const SparseRow& row, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& [j, v] : row.entries) s += v * x[j];
  return s;
}

ShiftedProgram Shift(const LinearProgram& lp) {
  ShiftedProgram sp;
  sp.n = lp.num_vars();
  sp.c = lp.objective();
  const std::vector<double>& lo = lp.lower();
  for (int i = 0; i < lp.num_inequalities(); ++i) {
    sp.a.push_back(lp.ub_rows()[i]);
    sp.b.push_back(lp.ub_rhs()[i] - RowDot(lp.ub_rows()[i], lo));
  }
  for (size_t j = 0; j < sp.n; ++j) {
    if (std::isfinite(lp.upper()[j])) {
      SparseRow r;
      r.Add(static_cast<int>(j), 1.0);
      sp.a.push_back(std::move(r));
      sp.b.push_back(lp.upper()[j] - lo[j]);
    }
  }
  for (int i = 0; i < lp.num_equalities(); ++i) {
    sp.e_rows.push_back(lp.eq_rows()[i]);
    sp.e.push_back(lp.eq_rhs()[i] - RowDot(lp.eq_rows()[i], lo));
  }
  return sp;
}

size_t PrimalSize(const ShiftedProgram& sp) {
  const size_t m = sp.a.size() + sp.e_rows.size();
  return m * (sp.n + m);
}

size_t DualSize(const ShiftedProgram& sp) {
  return sp.n * (sp.a.size() + 2 * sp.e_rows.size() + sp.n);
}

int DefaultIterations(size_t rows, size_t cols) {
  return static_cast<int>(std::min<size_t>(50 * (rows + cols) + 1000,
                                           std::numeric_limits<int>::max()));
}

absl::StatusOr<internal::SimplexResult> SolvePrimal(const ShiftedProgram& sp,
                                                    int max_iterations) {
  const size_t m1 = sp.a.size();
  const size_t m2 = sp.e_rows.size();
  internal::StandardForm f;
  f.a = Matrix(m1 + m2, sp.n + m1);
  f.b.resize(m1 + m2);
  f.c.assign(sp.n + m1, 0.0);
  std::copy(sp.c.begin(), sp.c.end(), f.c.begin());
  for (size_t i = 0; i < m1; ++i) {
    for (const auto& [j, v] : sp.a[i].entries) f.a(i, j) += v;
    f.a(i, sp.n + i) = 1.0;
    f.b[i] = sp.b[i];
  }
  for (size_t i = 0; i < m2; ++i) {
    for (const auto& [j, v] : sp.e_rows[i].entries) f.a(m1 + i, j) += v;
    f.b[m1 + i] = sp.e[i];
  }
  const int limit = max_iterations > 0
                        ? max_iterations
                        : DefaultIterations(f.a.rows(), f.a.cols());
  absl::StatusOr<internal::SimplexResult> r =
      internal::SolveStandardForm(std::move(f), limit);
  if (r.ok()) r->x.resize(sp.n);
  return r;
}

// Solves the dual in standard form
//   min b.s - e.v+ + e.v-  s.t.  -A^T s + E^T v+ - E^T v- + t = c,
// and reads x' off the reduced costs of the unit columns t.
absl::StatusOr<internal::SimplexResult> SolveDual(const ShiftedProgram& sp,
                                                  int max_iterations) {
  const size_t m1 = sp.a.size();
  const size_t m2 = sp.e_rows.size();
  const size_t cols = m1 + 2 * m2 + sp.n;
  internal::StandardForm f;
  f.a = Matrix(sp.n, cols);
  f.b = sp.c;
  f.c.assign(cols, 0.0);
  for (size_t i = 0; i < m1; ++i) {
    f.c[i] = sp.b[i];
    for (const auto& [j, v] : sp.a[i].entries) f.a(j, i) -= v;
  }
  for (size_t i = 0; i < m2; ++i) {
    f.c[m1 + i] = -sp.e[i];
    f.c[m1 + m2 + i] = sp.e[i];
    for (const auto& [j, v] : sp.e_rows[i].entries) {
      f.a(j, m1 + i) += v;
      f.a(j, m1 + m2 + i) -= v;
    }
  }
  const size_t t0 = m1 + 2 * m2;
  for (size_t j = 0; j < sp.n; ++j) f.a(j, t0 + j) = 1.0;
  const int limit = max_iterations > 0
                        ? max_iterations
                        : DefaultIterations(f.a.rows(), f.a.cols());
  absl::StatusOr<internal::SimplexResult> r =
      internal::SolveStandardForm(std::move(f), limit);
  if (!r.ok()) return r;
  internal::SimplexResult out;
  out.iterations = r->iterations;
  switch (r->status) {
    case LpStatus::kOptimal:
      out.status = LpStatus::kOptimal;
      out.x.resize(sp.n);
      for (size_t j = 0; j < sp.n; ++j) {
        out.x[j] = std::max(0.0, r->reduced_costs[t0 + j]);
      }
      break;
    case LpStatus::kUnbounded:
      out.status = LpStatus::kInfeasible;
      break;
    case LpStatus::kInfeasible:
      // Primal is infeasible or unbounded; the caller re-solves to tell which.
      out.status = LpStatus::kUnbounded;
      out.iterations = -1;
      break;
  }
  return out;
}

}  // namespace

LinearProgram::LinearProgram(int num_vars)
    : objective_(num_vars, 0.0),
      lower_(num_vars, 0.0),
      upper_(num_vars, kInf) {}

bool LinearProgram::AddLessEqual(SparseRow row, double rhs) {
  std::erase_if(row.entries, [](const auto& e) { return e.second == 0.0; });
  ub_rows_.push_back(std::move(row));
  ub_rhs_.push_back(rhs);
  return true;
}

bool LinearProgram::AddEqual(SparseRow row, double rhs) {
  std::erase_if(row.entries, [](const auto& e) { return e.second == 0.0; });
  if (row.entries.empty() && rhs == 0.0) return false;
  eq_rows_.push_back(std::move(row));
  eq_rhs_.push_back(rhs);
  return true;
}

absl::Status LinearProgram::Validate() const {
  const int n = num_vars();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(objective_[j])) {
      return absl::InvalidArgumentError(
          absl::StrCat("objective coefficient ", j, " is not finite"));
    }
    if (!std::isfinite(lower_[j]) || std::isnan(upper_[j]) ||
        upper_[j] < lower_[j]) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid bounds on variable ", j));
    }
  }
  auto check_rows = [n](const std::vector<SparseRow>& rows,
                        const std::vector<double>& rhs) -> absl::Status {
    for (size_t i = 0; i < rows.size(); ++i) {
      if (!std::isfinite(rhs[i])) {
        return absl::InvalidArgumentError(
            absl::StrCat("right-hand side of row ", i, " is not finite"));
      }
      for (const auto& [j, v] : rows[i].entries) {
        if (j < 0 || j >= n || !std::isfinite(v)) {
          return absl::InvalidArgumentError(
              absl::StrCat("bad coefficient in row ", i));
        }
      }
    }
    return absl::OkStatus();
  };
  if (absl::Status s = check_rows(ub_rows_, ub_rhs_); !s.ok()) return s;
  return check_rows(eq_rows_, eq_rhs_);
}

double LinearProgram::MaxViolation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, lower_[j] - x[j]);
    if (std::isfinite(upper_[j])) worst = std::max(worst, x[j] - upper_[j]);
  }
  for (size_t i = 0; i < ub_rows_.size(); ++i) {
    worst = std::max(worst, RowDot(ub_rows_[i], x) - ub_rhs_[i]);
  }
  for (size_t i = 0; i < eq_rows_.size(); ++i) {
    worst = std::max(worst, std::abs(RowDot(eq_rows_[i], x) - eq_rhs_[i]));
  }
  return worst;
}

double LinearProgram::MaxScaledViolation(const std::vector<double>& x) const {
  auto scale = [](const SparseRow& row, double rhs) {
    double s = std::max(1.0, std::abs(rhs));
    for (const auto& [j, v] : row.entries) s = std::max(s, std::abs(v));
    return s;
  };
  double worst = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    const double s = std::max({1.0, std::abs(lower_[j]),
                               std::isfinite(upper_[j]) ? std::abs(upper_[j]) : 0.0});
    worst = std::max(worst, (lower_[j] - x[j]) / s);
    if (std::isfinite(upper_[j])) worst = std::max(worst, (x[j] - upper_[j]) / s);
  }
  for (size_t i = 0; i < ub_rows_.size(); ++i) {
    worst = std::max(worst, (RowDot(ub_rows_[i], x) - ub_rhs_[i]) /
                                scale(ub_rows_[i], ub_rhs_[i]));
  }
  for (size_t i = 0; i < eq_rows_.size(); ++i) {
    worst = std::max(worst, std::abs(RowDot(eq_rows_[i], x) - eq_rhs_[i]) /
                                scale(eq_rows_[i], eq_rhs_[i]));
  }
  return worst;
}

double LinearProgram::ObjectiveValue(const std::vector<double>& x) const {
  double s = 0.0;
  for (size_t j = 0; j < x.size(); ++j) s += objective_[j] * x[j];
  return s;
}

std::string LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp,
                                   const LpOptions& options) {
  if (absl::Status s = lp.Validate(); !s.ok()) return s;
  const ShiftedProgram sp = Shift(lp);
  LpRoute route = options.route;
  if (route == LpRoute::kAuto) {
    route = DualSize(sp) < PrimalSize(sp) ? LpRoute::kDual : LpRoute::kPrimal;
  }

  auto finish = [&](const internal::SimplexResult& r) {
    LpSolution sol;
    sol.status = r.status;
    sol.iterations = r.iterations;
    if (r.status == LpStatus::kOptimal) {
      sol.values.resize(sp.n);
      for (size_t j = 0; j < sp.n; ++j) sol.values[j] = lp.lower()[j] + r.x[j];
      sol.objective_value = lp.ObjectiveValue(sol.values);
    }
    return sol;
  };

  if (route == LpRoute::kDual) {
    absl::StatusOr<internal::SimplexResult> r =
        SolveDual(sp, options.max_iterations);
    if (r.ok() && r->iterations >= 0) {
      LpSolution sol = finish(*r);
      if (sol.status != LpStatus::kOptimal ||
          lp.MaxScaledViolation(sol.values) <= kLpFeasibilityTolerance) {
        return sol;
      }
    }
    // Dual breakdown, an ambiguous dual verdict or a poor residual.
  }
  absl::StatusOr<internal::SimplexResult> r =
      SolvePrimal(sp, options.max_iterations);
  if (!r.ok()) return r.status();
  LpSolution sol = finish(*r);
  if (sol.status == LpStatus::kOptimal) {
    const double violation = lp.MaxScaledViolation(sol.values);
    if (violation > kLpFeasibilityTolerance) {
      return absl::InternalError(absl::StrFormat(
          "simplex solution violates constraints by %.3g", violation));
    }
  }
  return sol;
}

void WriteMps(const LinearProgram& lp, const std::string& name,
              std::ostream& out) {
  const int n = lp.num_vars();
  std::vector<std::vector<std::pair<std::string, double>>> columns(n);
  out << "NAME " << name << "\nROWS\n N COST\n";
  for (int i = 0; i < lp.num_inequalities(); ++i) {
    const std::string row = absl::StrCat("L", i);
    out << " L " << row << "\n";
    for (const auto& [j, v] : lp.ub_rows()[i].entries) {
      columns[j].emplace_back(row, v);
    }
  }
  for (int i = 0; i < lp.num_equalities(); ++i) {
    const std::string row = absl::StrCat("E", i);
    out << " E " << row << "\n";
    for (const auto& [j, v] : lp.eq_rows()[i].entries) {
      columns[j].emplace_back(row, v);
    }
  }
  out << "COLUMNS\n";
  for (int j = 0; j < n; ++j) {
    out << absl::StrFormat(" X%d COST %.17g\n", j, lp.objective()[j]);
    for (const auto& [row, v] : columns[j]) {
      out << absl::StrFormat(" X%d %s %.17g\n", j, row, v);
    }
  }
  out << "RHS\n";
  for (int i = 0; i < lp.num_inequalities(); ++i) {
    out << absl::StrFormat(" RHS L%d %.17g\n", i, lp.ub_rhs()[i]);
  }
  for (int i = 0; i < lp.num_equalities(); ++i) {
    out << absl::StrFormat(" RHS E%d %.17g\n", i, lp.eq_rhs()[i]);
  }
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    if (lp.lower()[j] != 0.0) {
      out << absl::StrFormat(" LO BND X%d %.17g\n", j, lp.lower()[j]);
    }
    if (std::isfinite(lp.upper()[j])) {
      out << absl::StrFormat(" UP BND X%d %.17g\n", j, lp.upper()[j]);
    }
  }
  out << "ENDATA\n";
}

}  // namespace mdp
