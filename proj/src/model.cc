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

#include "mdp/model.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace mdp {

absl::Status PriorModel::Validate(double tolerance) const {
  if (points.empty() || points.size() != mass.size()) {
    return absl::InvalidArgumentError(
        "prior needs at least one point and one mass per point");
  }
  double total = 0.0;
  for (size_t s = 0; s < points.size(); ++s) {
    if (points[s].dim() != points[0].dim() || !points[s].IsFinite()) {
      return absl::InvalidArgumentError(
          absl::StrCat("prior point ", s, " is malformed"));
    }
    if (!(mass[s] >= 0.0) || !std::isfinite(mass[s])) {
      return absl::InvalidArgumentError(
          absl::StrCat("prior mass ", s, " must be a finite non-negative number"));
    }
    total += mass[s];
  }
  if (std::abs(total - 1.0) > tolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("prior masses sum to %.17g, not 1", total));
  }
  return absl::OkStatus();
}

absl::Status OutputDomain::Validate() const {
  if (candidates.empty()) {
    return absl::InvalidArgumentError("output domain is empty");
  }
  for (size_t k = 0; k < candidates.size(); ++k) {
    if (candidates[k].dim() != candidates[0].dim() ||
        !candidates[k].IsFinite()) {
      return absl::InvalidArgumentError(
          absl::StrCat("output candidate ", k, " is malformed"));
    }
    for (size_t j = 0; j < k; ++j) {
      if (candidates[j] == candidates[k]) {
        return absl::InvalidArgumentError(
            absl::StrCat("output candidates ", j, " and ", k, " coincide"));
      }
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateLossMatrix(const Matrix& loss, size_t samples,
                                size_t outputs) {
  if (loss.rows() != samples || loss.cols() != outputs) {
    return absl::InvalidArgumentError(absl::StrCat(
        "loss matrix is ", loss.rows(), "x", loss.cols(), ", expected ",
        samples, "x", outputs));
  }
  for (double v : loss.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          "loss entries must be finite and non-negative");
    }
  }
  return absl::OkStatus();
}

}  // namespace mdp
