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

// Prior over the secret domain and the mechanism interface shared by the
// anchor-based mechanisms and the baselines.

#ifndef MDP_MODEL_H_
#define MDP_MODEL_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mdp/geometry.h"
#include "mdp/matrix.h"

namespace mdp {

// Weighted sample points (x, p(x)) standing in for the continuous prior.
struct PriorModel {
  std::vector<Point> points;
  std::vector<double> mass;

  size_t size() const { return points.size(); }

  // Masses non-negative and summing to 1 within `tolerance`; points finite
  // and of equal dimension.
  absl::Status Validate(double tolerance = 1e-12) const;
};

// Candidate outputs y_1..y_K.
struct OutputDomain {
  std::vector<Point> candidates;

  size_t size() const { return candidates.size(); }

  // K >= 1, finite, common dimension, no duplicates.
  absl::Status Validate() const;
};

// A randomized mapping from points of the domain to output indices.
class PerturbationMechanism {
 public:
  virtual ~PerturbationMechanism() = default;

  virtual size_t num_outputs() const = 0;

  // Probability vector over the outputs, summing to 1.
  virtual absl::StatusOr<std::vector<double>> Distribution(
      const Point& x) const = 0;

  virtual std::string name() const = 0;
};

// Rows = prior sample points, columns = outputs, entries L(x_s, y_k) >= 0.
absl::Status ValidateLossMatrix(const Matrix& loss, size_t samples,
                                size_t outputs);

}  // namespace mdp

#endif  // MDP_MODEL_H_
