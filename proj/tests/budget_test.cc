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

#include "mdp/budget.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace mdp {
namespace {

bool Contains(const std::vector<BudgetVector>& list, double a, double b) {
  return std::any_of(list.begin(), list.end(), [&](const BudgetVector& v) {
    return std::abs(v.eps[0] - a) < 1e-12 && std::abs(v.eps[1] - b) < 1e-12;
  });
}

TEST(EqualSplitTest, L2TwoAxes) {
  BudgetVector b = EqualSplit(1.0, Metric::L2(), 2).value();
  ASSERT_EQ(b.eps.size(), 2u);
  EXPECT_NEAR(b.eps[0], 1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_EQ(b.eps[0], b.eps[1]);
}

TEST(EqualSplitTest, L1ThreeAxes) {
  BudgetVector b = EqualSplit(0.6, Metric::L1(), 3).value();
  for (double e : b.eps) EXPECT_NEAR(e, 0.3, 1e-15);
}

TEST(EqualSplitTest, AlwaysPassesCheck) {
  for (double p : {1.0, 1.25, 2.0, 3.0, 7.0}) {
    for (size_t n : {1u, 2u, 3u, 5u}) {
      for (double eps : {0.1, 1.0, 3.3}) {
        BudgetVector b =
            EqualSplit(eps, Metric::Create(p).value(), n).value();
        BudgetReport r = CheckBudget(b);
        EXPECT_TRUE(r.ok);
        EXPECT_LE(std::abs(r.slack), 1e-12);
      }
    }
  }
}

TEST(EqualSplitTest, RejectsNonPositiveEps) {
  EXPECT_FALSE(EqualSplit(0.0, Metric::L2(), 2).ok());
}

TEST(FeasibleAllocationsTest, ResolutionThreeArc) {
  std::vector<BudgetVector> list =
      FeasibleAllocations(1.0, Metric::L2(), 2, 3).value();
  const double partner = std::sqrt(0.25 - 0.125 * 0.125);
  EXPECT_TRUE(Contains(list, 0.125, partner));
  EXPECT_TRUE(Contains(list, partner, 0.125));
  const double e = 1.0 / (2.0 * std::sqrt(2.0));
  EXPECT_TRUE(Contains(list, e, e));
  // Three arc points, their three mirrors and the equal split.
  EXPECT_EQ(list.size(), 7u);
}

TEST(FeasibleAllocationsTest, MirroredFeasibleAndSorted) {
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    for (int res : {2, 5, 9}) {
      std::vector<BudgetVector> list =
          FeasibleAllocations(0.8, Metric::Create(p).value(), 2, res).value();
      for (size_t i = 0; i < list.size(); ++i) {
        EXPECT_TRUE(CheckBudget(list[i]).ok);
        EXPECT_GT(list[i].eps[0], 0.0);
        EXPECT_GT(list[i].eps[1], 0.0);
        EXPECT_TRUE(Contains(list, list[i].eps[1], list[i].eps[0]));
        if (i > 0) EXPECT_LT(list[i - 1].eps, list[i].eps);
      }
      BudgetVector eq = EqualSplit(0.8, Metric::Create(p).value(), 2).value();
      EXPECT_TRUE(Contains(list, eq.eps[0], eq.eps[1]));
    }
  }
}

TEST(FeasibleAllocationsTest, OnlyTwoAxes) {
  absl::StatusOr<std::vector<BudgetVector>> r =
      FeasibleAllocations(1.0, Metric::L2(), 3, 4);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kUnimplemented);
}

// A convex loss in eps_1 with its minimum near 0.3.
absl::StatusOr<double> Bowl(const BudgetVector& b) {
  return (b.eps[0] - 0.3) * (b.eps[0] - 0.3) + 1.0;
}

TEST(OptimizeAllocationTest, SingleCandidate) {
  BudgetVector b = EqualSplit(1.0, Metric::L2(), 2).value();
  AllocationResult r = OptimizeAllocation({b}, Bowl).value();
  EXPECT_EQ(r.best.eps, b.eps);
  EXPECT_EQ(r.curve.size(), 1u);
}

TEST(OptimizeAllocationTest, BeatsEqualSplitAndIgnoresOrder) {
  std::vector<BudgetVector> list =
      FeasibleAllocations(1.0, Metric::L2(), 2, 6).value();
  AllocationResult base = OptimizeAllocation(list, Bowl).value();
  BudgetVector eq = EqualSplit(1.0, Metric::L2(), 2).value();
  EXPECT_LE(base.best_loss, Bowl(eq).value());
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(list.begin(), list.end(), rng);
    AllocationResult r = OptimizeAllocation(list, Bowl, 1 + t % 3).value();
    EXPECT_EQ(r.best.eps, base.best.eps);
    EXPECT_EQ(r.best_loss, base.best_loss);
    ASSERT_EQ(r.curve.size(), base.curve.size());
    for (size_t i = 0; i < r.curve.size(); ++i) {
      EXPECT_EQ(r.curve[i].budget.eps, base.curve[i].budget.eps);
    }
  }
}

TEST(OptimizeAllocationTest, TiesGoToSmallerFirstAxis) {
  std::vector<BudgetVector> list =
      FeasibleAllocations(1.0, Metric::L2(), 2, 4).value();
  AllocationResult r = OptimizeAllocation(
                           list, [](const BudgetVector&) -> absl::StatusOr<double> {
                             return 2.0;
                           })
                           .value();
  EXPECT_EQ(r.best.eps, list.front().eps);
}

TEST(OptimizeAllocationTest, SkipsFailuresAndReportsAllFailing) {
  std::vector<BudgetVector> list =
      FeasibleAllocations(1.0, Metric::L2(), 2, 4).value();
  auto partly = [](const BudgetVector& b) -> absl::StatusOr<double> {
    if (b.eps[0] < 0.2) return absl::InternalError("boom");
    return b.eps[0];
  };
  AllocationResult r = OptimizeAllocation(list, partly).value();
  EXPECT_GE(r.best.eps[0], 0.2);
  const size_t failed = std::count_if(r.curve.begin(), r.curve.end(),
                                      [](const AllocationPoint& p) {
                                        return !p.ok && p.error == "boom";
                                      });
  EXPECT_GT(failed, 0u);
  auto never = [](const BudgetVector&) -> absl::StatusOr<double> {
    return absl::InternalError("never");
  };
  EXPECT_FALSE(OptimizeAllocation(list, never).ok());
  EXPECT_FALSE(OptimizeAllocation({}, Bowl).ok());
}

TEST(LossCurveCsvTest, ColumnsAndSkippedFailures) {
  std::vector<AllocationPoint> curve(2);
  curve[0].budget.eps = {0.1, 0.2};
  curve[0].ok = true;
  curve[0].loss = 1.5;
  curve[1].budget.eps = {0.2, 0.1};
  curve[1].ok = false;
  std::ostringstream out;
  WriteLossCurveCsv(curve, out);
  EXPECT_EQ(out.str(),
            "eps1,eps2,loss\n"
            "0.10000000000000001,0.20000000000000001,1.5\n");
}

}  // namespace
}  // namespace mdp
