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

#include "mdp/baselines.h"

#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "mdp/interpolation.h"

namespace mdp {
namespace {

absl::Status CheckMechanismInputs(const OutputDomain& outputs, double eps) {
  if (absl::Status s = outputs.Validate(); !s.ok()) return s;
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("privacy budget must be positive, got ", eps));
  }
  return absl::OkStatus();
}

absl::Status CheckDim(const Point& x, const OutputDomain& outputs) {
  if (x.dim() != outputs.candidates[0].dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "point has dimension ", x.dim(), ", outputs have ",
        outputs.candidates[0].dim()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ExponentialMechanism> ExponentialMechanism::Create(
    OutputDomain outputs, double eps, Metric metric, double factor,
    std::string name) {
  if (absl::Status s = CheckMechanismInputs(outputs, eps); !s.ok()) return s;
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    return absl::InvalidArgumentError("exponent factor must be positive");
  }
  return ExponentialMechanism(std::move(outputs), eps, metric, factor,
                              std::move(name));
}

absl::StatusOr<std::vector<double>> ExponentialMechanism::Distribution(
    const Point& x) const {
  if (absl::Status s = CheckDim(x, outputs_); !s.ok()) return s;
  std::vector<double> logs(outputs_.size());
  for (size_t k = 0; k < logs.size(); ++k) {
    logs[k] = -factor_ * eps_ *
              LpDistanceUnchecked(x.coords(), outputs_.candidates[k].coords(),
                                  metric_);
  }
  return SoftmaxFromLogs(logs);
}

absl::StatusOr<ExponentialMechanism> MakeDiscreteLaplace(OutputDomain outputs,
                                                         double eps) {
  if (!outputs.candidates.empty() && outputs.candidates[0].dim() != 2) {
    return absl::UnimplementedError(
        "the planar Laplace baseline needs a two-dimensional domain");
  }
  return ExponentialMechanism::Create(std::move(outputs), eps, Metric::L2(),
                                      1.0, "Laplace");
}

absl::StatusOr<TruncatedExponentialMechanism>
TruncatedExponentialMechanism::Create(OutputDomain outputs, double eps,
                                      Metric metric, double radius,
                                      double factor) {
  if (absl::Status s = CheckMechanismInputs(outputs, eps); !s.ok()) return s;
  if (!(radius > 0.0) || !(factor > 0.0)) {
    return absl::InvalidArgumentError(
        "truncation radius and exponent factor must be positive");
  }
  return TruncatedExponentialMechanism(std::move(outputs), eps, metric, radius,
                                       factor);
}

absl::StatusOr<std::vector<double>> TruncatedExponentialMechanism::Distribution(
    const Point& x) const {
  if (absl::Status s = CheckDim(x, outputs_); !s.ok()) return s;
  const double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(outputs_.size(), kNegInf);
  bool any = false;
  for (size_t k = 0; k < logs.size(); ++k) {
    const double d = LpDistanceUnchecked(
        x.coords(), outputs_.candidates[k].coords(), metric_);
    if (d <= radius_) {
      logs[k] = -factor_ * eps_ * d;
      any = true;
    }
  }
  if (!any) {
    return absl::InvalidArgumentError(
        "no output candidate lies within the truncation radius");
  }
  return SoftmaxFromLogs(logs);
}

absl::StatusOr<RemappedMechanism> RemappedMechanism::Create(
    std::shared_ptr<const PerturbationMechanism> base, const PriorModel& prior,
    const Matrix& loss) {
  const size_t K = base->num_outputs();
  if (loss.rows() != prior.size() || loss.cols() != K) {
    return absl::InvalidArgumentError("loss matrix does not match the prior");
  }
  // posterior_cost(y, y') = sum_s p(s) z(y|s) L(s, y')
  Matrix cost(K, K, 0.0);
  std::vector<double> reach(K, 0.0);
  for (size_t s = 0; s < prior.size(); ++s) {
    absl::StatusOr<std::vector<double>> z = base->Distribution(prior.points[s]);
    if (!z.ok()) return z.status();
    for (size_t y = 0; y < K; ++y) {
      const double w = prior.mass[s] * (*z)[y];
      if (w == 0.0) continue;
      reach[y] += w;
      for (size_t y2 = 0; y2 < K; ++y2) cost(y, y2) += w * loss(s, y2);
    }
  }
  std::vector<int> map(K);
  for (size_t y = 0; y < K; ++y) {
    map[y] = static_cast<int>(y);
    if (reach[y] == 0.0) continue;
    for (size_t y2 = 0; y2 < K; ++y2) {
      if (cost(y, y2) < cost(y, map[y]) ||
          (cost(y, y2) == cost(y, map[y]) && static_cast<int>(y2) < map[y])) {
        map[y] = static_cast<int>(y2);
      }
    }
  }
  return RemappedMechanism(std::move(base), std::move(map));
}

absl::StatusOr<RemappedMechanism> RemappedMechanism::FromMap(
    std::shared_ptr<const PerturbationMechanism> base, std::vector<int> map) {
  if (map.size() != base->num_outputs()) {
    return absl::InvalidArgumentError("remap size differs from output count");
  }
  for (int m : map) {
    if (m < 0 || static_cast<size_t>(m) >= map.size()) {
      return absl::InvalidArgumentError("remap target out of range");
    }
  }
  return RemappedMechanism(std::move(base), std::move(map));
}

absl::StatusOr<std::vector<double>> RemappedMechanism::Distribution(
    const Point& x) const {
  absl::StatusOr<std::vector<double>> z = base_->Distribution(x);
  if (!z.ok()) return z.status();
  std::vector<double> out(z->size(), 0.0);
  for (size_t y = 0; y < z->size(); ++y) out[map_[y]] += (*z)[y];
  return out;
}

absl::StatusOr<CellConstantMechanism> CellConstantMechanism::Create(
    Partition partition, PerturbationTable table, OutputDomain outputs,
    double eps, Metric metric, std::string name) {
  if (absl::Status s = outputs.Validate(); !s.ok()) return s;
  if (table.rows() != partition.num_cells() || table.cols() != outputs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "table is ", table.rows(), "x", table.cols(), ", expected ",
        partition.num_cells(), "x", outputs.size()));
  }
  return CellConstantMechanism(std::move(partition), std::move(table),
                               std::move(outputs), eps, metric,
                               std::move(name));
}

absl::StatusOr<std::vector<double>> CellConstantMechanism::Distribution(
    const Point& x) const {
  absl::StatusOr<size_t> cell = partition_.LocateCell(x);
  if (!cell.ok()) return cell.status();
  std::span<const double> row = table_.Row(*cell);
  return std::vector<double>(row.begin(), row.end());
}

absl::StatusOr<CellConstantMechanism> BuildCoarseLpMechanism(
    const Partition& coarse, const PriorModel& prior, const Matrix& loss,
    const Matrix& center_loss, const OutputDomain& outputs, double eps,
    const Metric& metric) {
  const size_t M = coarse.num_cells();
  const size_t K = outputs.size();
  if (loss.rows() != prior.size() || loss.cols() != K ||
      center_loss.rows() != M || center_loss.cols() != K) {
    return absl::InvalidArgumentError("coarse LP inputs disagree in shape");
  }
  std::vector<double> mass(M, 0.0);
  std::vector<int> count(M, 0);
  Matrix weighted(M, K, 0.0);
  Matrix plain(M, K, 0.0);
  for (size_t s = 0; s < prior.size(); ++s) {
    absl::StatusOr<size_t> cell = coarse.LocateCell(prior.points[s]);
    if (!cell.ok()) return cell.status();
    mass[*cell] += prior.mass[s];
    ++count[*cell];
    for (size_t k = 0; k < K; ++k) {
      weighted(*cell, k) += prior.mass[s] * loss(s, k);
      plain(*cell, k) += loss(s, k);
    }
  }
  Matrix mean_loss(M, K);
  std::vector<Point> centers;
  for (size_t m = 0; m < M; ++m) {
    const Cell cell = coarse.GetCell(m);
    std::vector<double> c(cell.dim());
    for (size_t l = 0; l < cell.dim(); ++l) {
      c[l] = cell.base_corner()[l] + 0.5 * cell.sides()[l];
    }
    centers.emplace_back(std::move(c));
    for (size_t k = 0; k < K; ++k) {
      if (mass[m] > 0.0) {
        mean_loss(m, k) = weighted(m, k) / mass[m];
      } else if (count[m] > 0) {
        mean_loss(m, k) = plain(m, k) / count[m];
      } else {
        mean_loss(m, k) = center_loss(m, k);
      }
    }
  }
  absl::StatusOr<AnchorProgram> prog =
      BuildCoarseLp(centers, mass, mean_loss, eps, metric);
  if (!prog.ok()) return prog.status();
  absl::StatusOr<SolvedTable> solved = SolveAnchorProgram(*prog);
  if (!solved.ok()) return solved.status();
  return CellConstantMechanism::Create(coarse, std::move(solved->table),
                                       outputs, eps, metric);
}

}  // namespace mdp
