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

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mdp/parallel.h"

namespace mdp {
namespace {

bool LessByAxes(const BudgetVector& a, const BudgetVector& b) {
  return a.eps < b.eps;
}

bool NearlyEqual(const BudgetVector& a, const BudgetVector& b) {
  for (size_t l = 0; l < a.eps.size(); ++l) {
    if (std::abs(a.eps[l] - b.eps[l]) > 1e-12) return false;
  }
  return true;
}

}  // namespace

absl::StatusOr<BudgetVector> EqualSplit(double total_eps, const Metric& metric,
                                        size_t dims,
                                        BudgetConvention convention) {
  if (!(total_eps > 0.0) || !std::isfinite(total_eps)) {
    return absl::InvalidArgumentError("total budget must be positive");
  }
  if (dims == 0) return absl::InvalidArgumentError("dimension must be >= 1");
  const BudgetSurface s = SurfaceFor(convention, total_eps, metric);
  const double each =
      std::isinf(s.exponent)
          ? s.radius
          : s.radius / std::pow(static_cast<double>(dims), 1.0 / s.exponent);
  return BudgetVector{std::vector<double>(dims, each), total_eps, metric,
                      convention};
}

absl::StatusOr<std::vector<BudgetVector>> FeasibleAllocations(
    double total_eps, const Metric& metric, size_t dims, int resolution,
    BudgetConvention convention) {
  if (dims != 2) {
    return absl::UnimplementedError(
        "budget sweeps cover two-dimensional domains only; give explicit "
        "per-axis budgets instead");
  }
  if (resolution < 2) {
    return absl::InvalidArgumentError("sweep resolution must be >= 2");
  }
  absl::StatusOr<BudgetVector> equal =
      EqualSplit(total_eps, metric, dims, convention);
  if (!equal.ok()) return equal.status();
  const BudgetSurface s = SurfaceFor(convention, total_eps, metric);
  std::vector<BudgetVector> out;
  for (int i = 1; i <= resolution; ++i) {
    const double e1 = i * s.radius / (resolution + 1);
    double e2;
    if (std::isinf(s.exponent)) {
      e2 = s.radius;
    } else if (s.exponent == 1.0) {
      e2 = s.radius - e1;
    } else {
      e2 = std::pow(std::pow(s.radius, s.exponent) - std::pow(e1, s.exponent),
                    1.0 / s.exponent);
    }
    out.push_back({{e1, e2}, total_eps, metric, convention});
    out.push_back({{e2, e1}, total_eps, metric, convention});
  }
  std::vector<BudgetVector> kept = {*equal};
  for (const BudgetVector& b : out) {
    bool dup = false;
    for (const BudgetVector& k : kept) dup = dup || NearlyEqual(b, k);
    if (!dup) kept.push_back(b);
  }
  std::sort(kept.begin(), kept.end(), LessByAxes);
  return kept;
}

absl::StatusOr<AllocationResult> OptimizeAllocation(
    std::vector<BudgetVector> candidates, const AllocationEvaluator& evaluate,
    int threads) {
  if (candidates.empty()) {
    return absl::InvalidArgumentError("no budget candidates");
  }
  std::sort(candidates.begin(), candidates.end(), LessByAxes);
  std::vector<AllocationPoint> curve(candidates.size());
  ParallelFor(candidates.size(), threads, [&](size_t i) {
    curve[i].budget = candidates[i];
    absl::StatusOr<double> loss = evaluate(candidates[i]);
    if (loss.ok()) {
      curve[i].ok = true;
      curve[i].loss = *loss;
    } else {
      curve[i].error = std::string(loss.status().message());
    }
  });
  int best = -1;
  for (size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].ok && (best < 0 || curve[i].loss < curve[best].loss)) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    return absl::InternalError(absl::StrCat(
        "every budget candidate failed; first error: ", curve[0].error));
  }
  AllocationResult result;
  result.best = curve[best].budget;
  result.best_loss = curve[best].loss;
  result.curve = std::move(curve);
  return result;
}

void WriteLossCurveCsv(const std::vector<AllocationPoint>& curve,
                       std::ostream& out) {
  out << "eps1,eps2,loss\n";
  for (const AllocationPoint& p : curve) {
    if (!p.ok) continue;
    out << absl::StrFormat("%.17g,%.17g,%.17g\n", p.budget.eps[0],
                           p.budget.eps[1], p.loss);
  }
}

}  // namespace mdp
