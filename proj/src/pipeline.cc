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

#include "mdp/pipeline.h"

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mdp/baselines.h"
#include "mdp/evaluation.h"

namespace mdp {
namespace {

absl::StatusOr<Matrix> CenterLoss(const Instance& instance,
                                  const Partition& coarse) {
  absl::StatusOr<TaskLoss> loss = TaskLoss::Create(instance.graph, instance.tasks);
  if (!loss.ok()) return loss.status();
  std::vector<Point> centers;
  for (size_t m = 0; m < coarse.num_cells(); ++m) {
    const Cell cell = coarse.GetCell(m);
    std::vector<double> c(cell.dim());
    for (size_t l = 0; l < cell.dim(); ++l) {
      c[l] = cell.base_corner()[l] + 0.5 * cell.sides()[l];
    }
    centers.emplace_back(std::move(c));
  }
  return BuildLossMatrix(*loss, centers, instance.outputs);
}

}  // namespace

absl::StatusOr<BudgetMode> ParseBudgetMode(const std::string& s) {
  if (s == "sweep") return BudgetMode::kSweep;
  if (s == "equal") return BudgetMode::kEqual;
  if (s == "explicit") return BudgetMode::kExplicit;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown budget mode '", s, "' (expected sweep, equal or explicit)"));
}

std::string BudgetModeName(BudgetMode mode) {
  switch (mode) {
    case BudgetMode::kSweep:
      return "sweep";
    case BudgetMode::kEqual:
      return "equal";
    case BudgetMode::kExplicit:
      return "explicit";
  }
  return "unknown";
}

std::vector<std::string> BaseMethodTags() {
  return {"AIPO", "AIPO-E", "AIPO-R", "EM", "Laplace", "TEM", "CoarseLP"};
}

absl::StatusOr<std::shared_ptr<const InterpolatedMechanism>> SolveAipoTable(
    const Instance& instance, const Matrix& coefficients,
    const BudgetVector& budget, const std::string& name, const LpOptions& lp) {
  absl::StatusOr<AnchorProgram> prog = BuildApproxApo(
      instance.partition, instance.outputs.size(), budget, coefficients);
  if (!prog.ok()) return prog.status();
  absl::StatusOr<SolvedTable> solved = SolveAnchorProgram(*prog, lp);
  if (!solved.ok()) return solved.status();
  MechanismBudget provenance{name, budget.total_eps, budget.metric, budget.eps,
                             budget.convention};
  absl::StatusOr<InterpolatedMechanism> mech = InterpolatedMechanism::Create(
      instance.partition, std::move(solved->table), instance.outputs,
      std::move(provenance));
  if (!mech.ok()) return mech.status();
  return std::make_shared<const InterpolatedMechanism>(*std::move(mech));
}

absl::StatusOr<AipoResult> BuildAipo(const Instance& instance, double eps,
                                     const MethodOptions& options) {
  absl::StatusOr<Matrix> coeffs =
      SurrogateCoefficients(instance.partition, instance.prior, instance.loss);
  if (!coeffs.ok()) return coeffs.status();
  const size_t dims = instance.partition.dim();
  AipoResult result;
  if (options.budget_mode == BudgetMode::kSweep) {
    absl::StatusOr<std::vector<BudgetVector>> candidates = FeasibleAllocations(
        eps, options.metric, dims, options.sweep_resolution, options.convention);
    if (!candidates.ok()) return candidates.status();
    std::vector<std::shared_ptr<const InterpolatedMechanism>> built(
        candidates->size());
    // Candidates arrive sorted, so slot i matches curve entry i.
    std::vector<BudgetVector> order = *candidates;
    AllocationEvaluator evaluate =
        [&](const BudgetVector& b) -> absl::StatusOr<double> {
      absl::StatusOr<std::shared_ptr<const InterpolatedMechanism>> mech =
          SolveAipoTable(instance, *coeffs, b, "AIPO", options.lp);
      if (!mech.ok()) return mech.status();
      for (size_t i = 0; i < order.size(); ++i) {
        if (order[i].eps == b.eps) built[i] = *mech;
      }
      return ExpectedLoss(**mech, instance.prior, instance.loss);
    };
    absl::StatusOr<AllocationResult> best =
        OptimizeAllocation(*candidates, evaluate, options.threads);
    if (!best.ok()) return best.status();
    for (size_t i = 0; i < order.size(); ++i) {
      if (order[i].eps == best->best.eps) result.mechanism = built[i];
    }
    result.budget = best->best;
    result.loss = best->best_loss;
    result.curve = std::move(best->curve);
    return result;
  }
  BudgetVector budget;
  std::string name = "AIPO";
  if (options.budget_mode == BudgetMode::kEqual) {
    absl::StatusOr<BudgetVector> b =
        EqualSplit(eps, options.metric, dims, options.convention);
    if (!b.ok()) return b.status();
    budget = *b;
    name = "AIPO-E";
  } else {
    budget = BudgetVector{options.explicit_eps, eps, options.metric,
                          options.convention};
  }
  absl::StatusOr<std::shared_ptr<const InterpolatedMechanism>> mech =
      SolveAipoTable(instance, *coeffs, budget, name, options.lp);
  if (!mech.ok()) return mech.status();
  absl::StatusOr<double> loss =
      ExpectedLoss(**mech, instance.prior, instance.loss, options.threads);
  if (!loss.ok()) return loss.status();
  result.mechanism = *mech;
  result.budget = budget;
  result.loss = *loss;
  return result;
}

absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> BuildMethod(
    const std::string& tag, const Instance& instance, double eps,
    const MethodOptions& options) {
  if (absl::StartsWith(tag, "RMP-")) {
    absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> base =
        BuildMethod(tag.substr(4), instance, eps, options);
    if (!base.ok()) return base.status();
    absl::StatusOr<RemappedMechanism> remapped =
        RemappedMechanism::Create(*base, instance.prior, instance.loss);
    if (!remapped.ok()) return remapped.status();
    return std::make_shared<const RemappedMechanism>(*std::move(remapped));
  }
  if (tag == "AIPO" || tag == "AIPO-E") {
    MethodOptions o = options;
    if (tag == "AIPO-E") o.budget_mode = BudgetMode::kEqual;
    absl::StatusOr<AipoResult> r = BuildAipo(instance, eps, o);
    if (!r.ok()) return r.status();
    return std::shared_ptr<const PerturbationMechanism>(r->mechanism);
  }
  if (tag == "AIPO-R") {
    absl::StatusOr<Matrix> coeffs =
        SurrogateCoefficients(instance.partition, instance.prior, instance.loss);
    if (!coeffs.ok()) return coeffs.status();
    absl::StatusOr<AnchorProgram> prog =
        BuildAipoRelaxed(instance.partition, instance.outputs.size(), eps,
                         options.metric, *coeffs);
    if (!prog.ok()) return prog.status();
    absl::StatusOr<SolvedTable> solved = SolveAnchorProgram(*prog, options.lp);
    if (!solved.ok()) return solved.status();
    absl::StatusOr<InterpolatedMechanism> mech = InterpolatedMechanism::Create(
        instance.partition, std::move(solved->table), instance.outputs,
        MechanismBudget{"AIPO-R", eps, options.metric, {}, options.convention});
    if (!mech.ok()) return mech.status();
    return std::make_shared<const InterpolatedMechanism>(*std::move(mech));
  }
  if (tag == "EM") {
    absl::StatusOr<ExponentialMechanism> m = ExponentialMechanism::Create(
        instance.outputs, eps, options.metric, options.em_factor);
    if (!m.ok()) return m.status();
    return std::make_shared<const ExponentialMechanism>(*std::move(m));
  }
  if (tag == "Laplace") {
    absl::StatusOr<ExponentialMechanism> m =
        MakeDiscreteLaplace(instance.outputs, eps);
    if (!m.ok()) return m.status();
    return std::make_shared<const ExponentialMechanism>(*std::move(m));
  }
  if (tag == "TEM") {
    const double radius = options.tem_radius > 0.0 ? options.tem_radius
                                                   : DefaultTruncationRadius(eps);
    absl::StatusOr<TruncatedExponentialMechanism> m =
        TruncatedExponentialMechanism::Create(instance.outputs, eps,
                                              options.metric, radius,
                                              options.em_factor);
    if (!m.ok()) return m.status();
    return std::make_shared<const TruncatedExponentialMechanism>(*std::move(m));
  }
  if (tag == "CoarseLP") {
    absl::StatusOr<Partition> coarse =
        Partition::Create(instance.box, options.coarse_cells);
    if (!coarse.ok()) return coarse.status();
    absl::StatusOr<Matrix> center_loss = CenterLoss(instance, *coarse);
    if (!center_loss.ok()) return center_loss.status();
    absl::StatusOr<CellConstantMechanism> m = BuildCoarseLpMechanism(
        *coarse, instance.prior, instance.loss, *center_loss, instance.outputs,
        eps, options.metric);
    if (!m.ok()) return m.status();
    return std::make_shared<const CellConstantMechanism>(*std::move(m));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown method '", tag, "' (known: ",
                   absl::StrJoin(BaseMethodTags(), ", "), ", RMP-<method>)"));
}

absl::StatusOr<double> InstanceLowerBound(const Instance& instance, double eps,
                                          const MethodOptions& options) {
  return LowerBound(instance.partition, instance.prior, instance.loss, eps,
                    options.metric, options.lp);
}

}  // namespace mdp
