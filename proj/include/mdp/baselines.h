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

// Comparison mechanisms: exponential, discretized planar Laplace, truncated
// exponential, Bayesian remapping and the cell-constant coarse LP.

#ifndef MDP_BASELINES_H_
#define MDP_BASELINES_H_

#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdp/apo.h"
#include "mdp/geometry.h"
#include "mdp/matrix.h"
#include "mdp/model.h"

namespace mdp {

// z(k|x) proportional to exp(-factor * eps * d_p(x, y_k)). factor 0.5 gives
// eps-mDP for any candidate set.
class ExponentialMechanism : public PerturbationMechanism {
 public:
  static absl::StatusOr<ExponentialMechanism> Create(OutputDomain outputs,
                                                     double eps, Metric metric,
                                                     double factor = 0.5,
                                                     std::string name = "EM");

  size_t num_outputs() const override { return outputs_.size(); }
  std::string name() const override { return name_; }
  absl::StatusOr<std::vector<double>> Distribution(
      const Point& x) const override;

  const OutputDomain& outputs() const { return outputs_; }
  double eps() const { return eps_; }
  const Metric& metric() const { return metric_; }
  double factor() const { return factor_; }

 private:
  ExponentialMechanism(OutputDomain outputs, double eps, Metric metric,
                       double factor, std::string name)
      : outputs_(std::move(outputs)),
        eps_(eps),
        metric_(metric),
        factor_(factor),
        name_(std::move(name)) {}

  OutputDomain outputs_;
  double eps_;
  Metric metric_;
  double factor_;
  std::string name_;
};

// Normalized exp(-eps * d_2) over the candidates; planar domains only.
absl::StatusOr<ExponentialMechanism> MakeDiscreteLaplace(OutputDomain outputs,
                                                         double eps);

inline double DefaultTruncationRadius(double eps) { return 3.0 / eps; }

// The exponential mechanism restricted to candidates within `radius` of x.
class TruncatedExponentialMechanism : public PerturbationMechanism {
 public:
  static absl::StatusOr<TruncatedExponentialMechanism> Create(
      OutputDomain outputs, double eps, Metric metric, double radius,
      double factor = 0.5);

  size_t num_outputs() const override { return outputs_.size(); }
  std::string name() const override { return "TEM"; }
  absl::StatusOr<std::vector<double>> Distribution(
      const Point& x) const override;

  const OutputDomain& outputs() const { return outputs_; }
  double eps() const { return eps_; }
  const Metric& metric() const { return metric_; }
  double radius() const { return radius_; }
  double factor() const { return factor_; }

 private:
  TruncatedExponentialMechanism(OutputDomain outputs, double eps, Metric metric,
                                double radius, double factor)
      : outputs_(std::move(outputs)),
        eps_(eps),
        metric_(metric),
        radius_(radius),
        factor_(factor) {}

  OutputDomain outputs_;
  double eps_;
  Metric metric_;
  double radius_;
  double factor_;
};

// Post-processing of a base mechanism by the deterministic map
// g(y) = argmin_{y'} sum_s p(s) z(y|s) L(s, y'). Unreachable outputs map to
// themselves; ties go to the lowest index.
class RemappedMechanism : public PerturbationMechanism {
 public:
  static absl::StatusOr<RemappedMechanism> Create(
      std::shared_ptr<const PerturbationMechanism> base,
      const PriorModel& prior, const Matrix& loss);
  static absl::StatusOr<RemappedMechanism> FromMap(
      std::shared_ptr<const PerturbationMechanism> base, std::vector<int> map);

  size_t num_outputs() const override { return base_->num_outputs(); }
  std::string name() const override { return "RMP-" + base_->name(); }
  absl::StatusOr<std::vector<double>> Distribution(
      const Point& x) const override;

  const PerturbationMechanism& base() const { return *base_; }
  std::shared_ptr<const PerturbationMechanism> shared_base() const {
    return base_;
  }
  const std::vector<int>& map() const { return map_; }

 private:
  RemappedMechanism(std::shared_ptr<const PerturbationMechanism> base,
                    std::vector<int> map)
      : base_(std::move(base)), map_(std::move(map)) {}

  std::shared_ptr<const PerturbationMechanism> base_;
  std::vector<int> map_;
};

// One table row per cell of a (coarse) partition; every point of a cell gets
// that cell's row.
class CellConstantMechanism : public PerturbationMechanism {
 public:
  static absl::StatusOr<CellConstantMechanism> Create(Partition partition,
                                                      PerturbationTable table,
                                                      OutputDomain outputs,
                                                      double eps,
                                                      Metric metric,
                                                      std::string name = "CoarseLP");

  size_t num_outputs() const override { return outputs_.size(); }
  std::string name() const override { return name_; }
  absl::StatusOr<std::vector<double>> Distribution(
      const Point& x) const override;

  const Partition& partition() const { return partition_; }
  const PerturbationTable& table() const { return table_; }
  const OutputDomain& outputs() const { return outputs_; }
  double eps() const { return eps_; }
  const Metric& metric() const { return metric_; }

 private:
  CellConstantMechanism(Partition partition, PerturbationTable table,
                        OutputDomain outputs, double eps, Metric metric,
                        std::string name)
      : partition_(std::move(partition)),
        table_(std::move(table)),
        outputs_(std::move(outputs)),
        eps_(eps),
        metric_(metric),
        name_(std::move(name)) {}

  Partition partition_;
  PerturbationTable table_;
  OutputDomain outputs_;
  double eps_;
  Metric metric_;
  std::string name_;
};

// Solves the coarse LP with the cell centers of `coarse` as representatives.
// Each representative carries its cell's prior mass and the mass-weighted
// mean loss of the cell's samples (the plain mean for massless cells; the
// center's own row of `center_loss` for cells without samples).
absl::StatusOr<CellConstantMechanism> BuildCoarseLpMechanism(
    const Partition& coarse, const PriorModel& prior, const Matrix& loss,
    const Matrix& center_loss, const OutputDomain& outputs, double eps,
    const Metric& metric);

}  // namespace mdp

#endif  // MDP_BASELINES_H_
