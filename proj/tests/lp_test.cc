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
#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace mdp {
namespace {

constexpr LpRoute kRoutes[] = {LpRoute::kAuto, LpRoute::kPrimal, LpRoute::kDual};

SparseRow Row(std::initializer_list<std::pair<int, double>> entries) {
  SparseRow r;
  for (const auto& [j, v] : entries) r.Add(j, v);
  return r;
}

LpSolution Solve(const LinearProgram& lp, LpRoute route) {
  LpOptions options;
  options.route = route;
  absl::StatusOr<LpSolution> s = SolveLp(lp, options);
  EXPECT_TRUE(s.ok()) << s.status();
  return s.ok() ? *s : LpSolution{};
}

TEST(SolveLpTest, LowerBoundedScalar) {
  for (LpRoute route : kRoutes) {
    LinearProgram lp(1);
    lp.SetObjective(0, 1.0);
    lp.SetBounds(0, 3.0, std::numeric_limits<double>::infinity());
    LpSolution s = Solve(lp, route);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.values[0], 3.0, 1e-12);
    EXPECT_NEAR(s.objective_value, 3.0, 1e-12);
  }
}

TEST(SolveLpTest, ScalarViaRow) {
  for (LpRoute route : kRoutes) {
    LinearProgram lp(1);
    lp.SetObjective(0, 1.0);
    lp.AddLessEqual(Row({{0, -1.0}}), -3.0);
    LpSolution s = Solve(lp, route);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, 3.0, 1e-12);
  }
}

TEST(SolveLpTest, FacetOptimum) {
  for (LpRoute route : kRoutes) {
    LinearProgram lp(2);
    lp.SetObjective(0, -1.0);
    lp.SetObjective(1, -1.0);
    lp.AddLessEqual(Row({{0, 1.0}, {1, 1.0}}), 1.0);
    LpSolution s = Solve(lp, route);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, -1.0, 1e-12);
    EXPECT_NEAR(s.values[0] + s.values[1], 1.0, 1e-12);
  }
}

TEST(SolveLpTest, SimplexVertex) {
  for (LpRoute route : kRoutes) {
    LinearProgram lp(2);
    lp.SetObjective(0, 1.0);
    lp.SetObjective(1, 3.0);
    lp.AddEqual(Row({{0, 1.0}, {1, 1.0}}), 1.0);
    LpSolution s = Solve(lp, route);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.values[0], 1.0, 1e-12);
    EXPECT_NEAR(s.values[1], 0.0, 1e-12);
    EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
  }
}

TEST(SolveLpTest, ReportsInfeasible) {
  for (LpRoute route : kRoutes) {
    LinearProgram lp(2);
    lp.AddEqual(Row({{0, 1.0}, {1, 1.0}}), 1.0);
    lp.AddLessEqual(Row({{0, 1.0}, {1, 1.0}}), 0.5);
    EXPECT_EQ(Solve(lp, route).status, LpStatus::kInfeasible);
  }
}

TEST(SolveLpTest, ReportsUnbounded) {
  for (LpRoute route : kRoutes) {
    LinearProgram lp(2);
    lp.SetObjective(0, -1.0);
    lp.AddLessEqual(Row({{0, 1.0}, {1, -1.0}}), 1.0);
    EXPECT_EQ(Solve(lp, route).status, LpStatus::kUnbounded);
  }
}

TEST(SolveLpTest, RedundantEqualitiesAreTolerated) {
  for (LpRoute route : kRoutes) {
    LinearProgram lp(3);
    lp.SetObjective(0, 2.0);
    lp.SetObjective(1, 1.0);
    lp.SetObjective(2, 3.0);
    lp.AddEqual(Row({{0, 1.0}, {1, 1.0}, {2, 1.0}}), 1.0);
    lp.AddEqual(Row({{0, 2.0}, {1, 2.0}, {2, 2.0}}), 2.0);
    lp.AddEqual(Row({{1, 1.0}}), 0.25);
    LpSolution s = Solve(lp, route);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, 2.0 * 0.75 + 0.25, 1e-10);
  }
}

TEST(LinearProgramTest, DropsDegenerateEqualityRowsAndZeros) {
  LinearProgram lp(2);
  EXPECT_FALSE(lp.AddEqual(Row({}), 0.0));
  SparseRow r;
  r.entries = {{0, 0.0}, {1, 2.0}};
  EXPECT_TRUE(lp.AddEqual(r, 1.0));
  EXPECT_EQ(lp.num_equalities(), 1);
  EXPECT_EQ(lp.eq_rows()[0].entries.size(), 1u);
}

TEST(LinearProgramTest, ValidateRejectsBadIndex) {
  LinearProgram lp(1);
  lp.AddLessEqual(Row({{3, 1.0}}), 1.0);
  EXPECT_EQ(SolveLp(lp).status().code(), absl::StatusCode::kInvalidArgument);
}

// Exhaustive vertex enumeration: every vertex is the intersection of n
// linearly independent tight constraints; equalities must hold everywhere.
struct DenseConstraint {
  std::vector<double> a;
  double b;
  bool equality;
};

bool SolveSquare(std::vector<std::vector<double>> m, std::vector<double> rhs,
                 std::vector<double>& x) {
  const size_t n = rhs.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    if (std::abs(m[piv][c]) < 1e-10) return false;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  x.resize(n);
  for (size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

double VertexOracle(const std::vector<double>& c,
                    const std::vector<DenseConstraint>& cons, bool& feasible) {
  const size_t n = c.size();
  feasible = false;
  double best = std::numeric_limits<double>::infinity();
  if (cons.size() < n) return best;
  std::vector<bool> mask(cons.size(), false);
  std::fill(mask.begin(), mask.begin() + n, true);
  do {
    std::vector<std::vector<double>> m;
    std::vector<double> rhs;
    for (size_t k = 0; k < cons.size(); ++k) {
      if (mask[k]) {
        m.push_back(cons[k].a);
        rhs.push_back(cons[k].b);
      }
    }
    std::vector<double> x;
    if (!SolveSquare(m, rhs, x)) continue;
    bool ok = true;
    for (const DenseConstraint& dc : cons) {
      double lhs = 0.0;
      for (size_t j = 0; j < n; ++j) lhs += dc.a[j] * x[j];
      if (dc.equality ? std::abs(lhs - dc.b) > 1e-8 : lhs > dc.b + 1e-8) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    feasible = true;
    double obj = 0.0;
    for (size_t j = 0; j < n; ++j) obj += c[j] * x[j];
    best = std::min(best, obj);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

TEST(SolveLpPropertyTest, MatchesVertexEnumerationOnRandomPrograms) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> nvar(1, 6);
  int infeasible_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = nvar(rng);
    const int m_ub = std::uniform_int_distribution<int>(0, 5)(rng);
    const int m_eq = std::uniform_int_distribution<int>(0, std::min(2, n))(rng);
    const bool make_feasible = trial % 5 != 0;
    std::vector<double> x0(n);
    for (double& v : x0) v = 2.0 * unit(rng);
    LinearProgram lp(n);
    std::vector<double> c(n);
    std::vector<DenseConstraint> dense;
    for (int j = 0; j < n; ++j) {
      c[j] = coef(rng);
      lp.SetObjective(j, c[j]);
      const double lo = unit(rng) < 0.3 ? 0.5 * unit(rng) : 0.0;
      const double hi = 3.0;
      lp.SetBounds(j, lo, hi);
      if (make_feasible) x0[j] = std::max(x0[j], lo);
      std::vector<double> e(n, 0.0);
      e[j] = -1.0;
      dense.push_back({e, -lo, false});
      e[j] = 1.0;
      dense.push_back({e, hi, false});
    }
    auto add_row = [&](bool equality) {
      std::vector<double> a(n);
      SparseRow row;
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) {
        a[j] = unit(rng) < 0.25 ? 0.0 : coef(rng);
        row.Add(j, a[j]);
        lhs += a[j] * x0[j];
      }
      double b = make_feasible ? lhs + (equality ? 0.0 : unit(rng)) : coef(rng);
      if (equality) {
        if (row.entries.empty()) return;
        lp.AddEqual(row, b);
      } else {
        lp.AddLessEqual(row, b);
      }
      dense.push_back({a, b, equality});
    };
    for (int i = 0; i < m_ub; ++i) add_row(false);
    for (int i = 0; i < m_eq; ++i) add_row(true);

    bool feasible = false;
    const double oracle = VertexOracle(c, dense, feasible);
    if (!feasible) ++infeasible_seen;
    for (LpRoute route : kRoutes) {
      LpSolution s = Solve(lp, route);
      if (!feasible) {
        EXPECT_EQ(s.status, LpStatus::kInfeasible) << "trial " << trial;
        continue;
      }
      ASSERT_EQ(s.status, LpStatus::kOptimal) << "trial " << trial;
      EXPECT_NEAR(s.objective_value, oracle, 1e-6) << "trial " << trial;
      EXPECT_LE(lp.MaxViolation(s.values), 1e-7);
    }
  }
  EXPECT_GT(infeasible_seen, 0);
}

TEST(SolveLpTest, DeterministicAcrossRuns) {
  LinearProgram lp(4);
  for (int j = 0; j < 4; ++j) lp.SetObjective(j, 1.0);
  lp.AddEqual(Row({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}}), 1.0);
  LpSolution a = Solve(lp, LpRoute::kAuto);
  LpSolution b = Solve(lp, LpRoute::kAuto);
  EXPECT_EQ(a.values, b.values);
}

TEST(WriteMpsTest, ContainsSections) {
  LinearProgram lp(2);
  lp.SetObjective(0, 1.0);
  lp.AddLessEqual(Row({{0, 1.0}, {1, 1.0}}), 1.0);
  lp.AddEqual(Row({{1, 1.0}}), 0.5);
  lp.SetBounds(0, 0.0, 2.0);
  std::ostringstream out;
  WriteMps(lp, "tiny", out);
  const std::string s = out.str();
  for (const char* section : {"NAME tiny", "ROWS", " L L0", " E E0", "COLUMNS",
                              "RHS", "BOUNDS", " UP BND X0 2", "ENDATA"}) {
    EXPECT_NE(s.find(section), std::string::npos) << section;
  }
}

}  // namespace
}  // namespace mdp
