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

// Empirical mDP audit: perturbation probability ratios over sampled point
// pairs, violation ratios and ratio histograms.

#ifndef MDP_AUDIT_H_
#define MDP_AUDIT_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mdp/geometry.h"
#include "mdp/model.h"

namespace mdp {

inline constexpr double kAuditFloor = 1e-12;
inline constexpr double kAuditRelativeTolerance = 1e-12;

// |ln z(k|x) - ln z(k|x2)| / d_p(x, x2) with probabilities floored at
// kAuditFloor. Coincident points are an error.
absl::StatusOr<double> Ppr(const PerturbationMechanism& mechanism,
                           const Point& x, const Point& x2, size_t output,
                           const Metric& metric);

struct AuditOptions {
  double eps = 1.0;
  Metric metric = Metric::L2();
  size_t sample_count = 1000;
  uint64_t seed = 0;
  size_t top_k = 10;
  size_t histogram_bins = 20;  // over [0, 2 eps), plus one overflow bin
  int threads = 1;
};

struct PairOffender {
  size_t i = 0;
  size_t j = 0;
  size_t output = 0;
  double ppr = 0.0;
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;  // +inf for the overflow bin
  uint64_t count = 0;
};

struct AuditReport {
  double eps = 0.0;
  uint64_t seed = 0;
  size_t sampled_points = 0;
  uint64_t pair_count = 0;
  uint64_t violating_pairs = 0;
  double violation_ratio = 0.0;  // percent of pairs
  uint64_t pair_output_count = 0;
  uint64_t violating_pair_outputs = 0;
  double pair_output_violation_ratio = 0.0;  // percent of (pair, output)
  double max_ppr = 0.0;
  std::vector<PairOffender> offenders;  // largest max-over-output ratios
  std::vector<HistogramBin> histogram;  // of max-over-output ratios
};

// `count` points uniform in the box, reproducible per seed.
std::vector<Point> SampleUniformPoints(const Box& box, size_t count,
                                       uint64_t seed);

// A pair violates when its largest ratio over outputs exceeds
// eps * (1 + kAuditRelativeTolerance). Pairs of coincident points are skipped.
absl::StatusOr<AuditReport> AuditPoints(const PerturbationMechanism& mechanism,
                                        const std::vector<Point>& points,
                                        const AuditOptions& options);

absl::StatusOr<AuditReport> RunAudit(const PerturbationMechanism& mechanism,
                                     const Box& domain,
                                     const AuditOptions& options);

std::string AuditReportToJson(const AuditReport& report);
void WriteHistogramCsv(const AuditReport& report, std::ostream& out);

}  // namespace mdp

#endif  // MDP_AUDIT_H_
