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

#include "mdp/interpolation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "mdp/random.h"

namespace mdp {

absl::StatusOr<double> LogConvex1d(double z_lo, double z_hi, double lambda) {
  if (!(z_lo > 0.0) || !(z_hi > 0.0)) {
    return absl::InvalidArgumentError("interpolated probabilities must be positive");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    return absl::InvalidArgumentError("lambda must lie in [0, 1]");
  }
  if (lambda == 1.0) return z_lo;
  if (lambda == 0.0) return z_hi;
  return std::exp(lambda * std::log(z_lo) + (1.0 - lambda) * std::log(z_hi));
}

std::vector<double> SoftmaxFromLogs(const std::vector<double>& logs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : logs) top = std::max(top, v);
  std::vector<double> out(logs.size());
  double sum = 0.0;
  for (size_t k = 0; k < logs.size(); ++k) {
    out[k] = std::exp(logs[k] - top);
    sum += out[k];
  }
  for (double& v : out) v /= sum;
  return out;
}

absl::StatusOr<InterpolatedMechanism> InterpolatedMechanism::Create(
    Partition partition, PerturbationTable table, OutputDomain outputs,
    MechanismBudget budget) {
  if (absl::Status s = outputs.Validate(); !s.ok()) return s;
  if (table.rows() != partition.num_anchors() ||
      table.cols() != outputs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "table is ", table.rows(), "x", table.cols(), ", expected ",
        partition.num_anchors(), "x", outputs.size()));
  }
  Matrix logs(table.rows(), table.cols());
  for (size_t i = 0; i < table.rows(); ++i) {
    for (size_t k = 0; k < table.cols(); ++k) {
      const double v = table(i, k);
      if (!(v > 0.0) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "table entry (", i, ", ", k, ") must be positive and finite"));
      }
      logs(i, k) = std::log(v);
    }
  }
  return InterpolatedMechanism(std::move(partition), std::move(table),
                               std::move(outputs), std::move(budget),
                               std::move(logs));
}

absl::StatusOr<std::vector<double>> InterpolatedMechanism::LogUnnormalized(
    const Point& x) const {
  absl::StatusOr<size_t> cell = partition_.LocateCell(x);
  if (!cell.ok()) return cell.status();
  absl::StatusOr<CellWeights> w =
      InterpolationWeights(partition_.GetCell(*cell), x);
  if (!w.ok()) return w.status();
  const size_t K = num_outputs();
  std::vector<double> logs(K, 0.0);
  for (uint32_t g = 0; g < partition_.corners_per_cell(); ++g) {
    const double weight = w->Weight(g);
    if (weight == 0.0) continue;
    std::span<const double> row = log_table_.Row(partition_.CornerAnchor(*cell, g));
    for (size_t k = 0; k < K; ++k) logs[k] += weight * row[k];
  }
  return logs;
}

absl::StatusOr<double> InterpolatedMechanism::Unnormalized(
    const Point& x, size_t output) const {
  if (output >= num_outputs()) {
    return absl::OutOfRangeError(absl::StrCat("output index ", output));
  }
  absl::StatusOr<std::vector<double>> logs = LogUnnormalized(x);
  if (!logs.ok()) return logs.status();
  return std::exp((*logs)[output]);
}

absl::StatusOr<std::vector<double>> InterpolatedMechanism::Distribution(
    const Point& x) const {
  absl::StatusOr<std::vector<double>> logs = LogUnnormalized(x);
  if (!logs.ok()) return logs.status();
  return SoftmaxFromLogs(*logs);
}

absl::StatusOr<size_t> InterpolatedMechanism::Sample(
    const Point& x, std::mt19937_64& rng) const {
  absl::StatusOr<std::vector<double>> dist = Distribution(x);
  if (!dist.ok()) return dist.status();
  return SampleIndex(*dist, rng);
}

}  // namespace mdp
