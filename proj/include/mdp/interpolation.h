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

// Log-convex interpolation of an anchor table over the whole domain.

#ifndef MDP_INTERPOLATION_H_
#define MDP_INTERPOLATION_H_

#include <random>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdp/apo.h"
#include "mdp/geometry.h"
#include "mdp/matrix.h"
#include "mdp/model.h"

namespace mdp {

// exp(lambda ln z_lo + (1 - lambda) ln z_hi); both inputs must be positive.
absl::StatusOr<double> LogConvex1d(double z_lo, double z_hi, double lambda);

// Where a table came from: the method tag and the budget it was built under.
struct MechanismBudget {
  std::string method;
  double total_eps = 0.0;
  Metric metric = Metric::L2();
  std::vector<double> axis_eps;  // empty unless per-axis budgets were used
  BudgetConvention convention = BudgetConvention::kHalfDual;
};

// Anchor table extended to the domain by per-cell weighted geometric means of
// the corner rows, normalized over the outputs.
class InterpolatedMechanism : public PerturbationMechanism {
 public:
  // Requires one table row per anchor, one column per output and strictly
  // positive entries.
  static absl::StatusOr<InterpolatedMechanism> Create(Partition partition,
                                                      PerturbationTable table,
                                                      OutputDomain outputs,
                                                      MechanismBudget budget);

  size_t num_outputs() const override { return outputs_.size(); }
  std::string name() const override { return budget_.method; }

  absl::StatusOr<std::vector<double>> Distribution(
      const Point& x) const override;

  // ln of the unnormalized interpolant, for every output.
  absl::StatusOr<std::vector<double>> LogUnnormalized(const Point& x) const;
  absl::StatusOr<double> Unnormalized(const Point& x, size_t output) const;

  absl::StatusOr<size_t> Sample(const Point& x, std::mt19937_64& rng) const;

  const Partition& partition() const { return partition_; }
  const PerturbationTable& table() const { return table_; }
  const OutputDomain& outputs() const { return outputs_; }
  const MechanismBudget& budget() const { return budget_; }

 private:
  InterpolatedMechanism(Partition partition, PerturbationTable table,
                        OutputDomain outputs, MechanismBudget budget,
                        Matrix log_table)
      : partition_(std::move(partition)),
        table_(std::move(table)),
        outputs_(std::move(outputs)),
        budget_(std::move(budget)),
        log_table_(std::move(log_table)) {}

  Partition partition_;
  PerturbationTable table_;
  OutputDomain outputs_;
  MechanismBudget budget_;
  Matrix log_table_;
};

// Normalizes log-weights into probabilities (log-sum-exp).
std::vector<double> SoftmaxFromLogs(const std::vector<double>& logs);

}  // namespace mdp

#endif  // MDP_INTERPOLATION_H_
