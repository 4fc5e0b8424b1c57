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

#include "mdp/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "mdp/parallel.h"
#include "mdp/random.h"

namespace mdp {
namespace {

bool OffenderBefore(const PairOffender& a, const PairOffender& b) {
  if (a.ppr != b.ppr) return a.ppr > b.ppr;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

void KeepTop(std::vector<PairOffender>& list, size_t k) {
  std::sort(list.begin(), list.end(), OffenderBefore);
  if (list.size() > k) list.resize(k);
}

struct Partial {
  uint64_t pairs = 0;
  uint64_t violating = 0;
  uint64_t pair_outputs = 0;
  uint64_t violating_outputs = 0;
  double max_ppr = 0.0;
  std::vector<uint64_t> bins;
  std::vector<PairOffender> top;
};

}  // namespace

absl::StatusOr<double> Ppr(const PerturbationMechanism& mechanism,
                           const Point& x, const Point& x2, size_t output,
                           const Metric& metric) {
  absl::StatusOr<double> d = LpDistance(x, x2, metric);
  if (!d.ok()) return d.status();
  if (*d == 0.0) {
    return absl::InvalidArgumentError("ratio undefined for coincident points");
  }
  if (output >= mechanism.num_outputs()) {
    return absl::OutOfRangeError(absl::StrCat("output index ", output));
  }
  absl::StatusOr<std::vector<double>> a = mechanism.Distribution(x);
  if (!a.ok()) return a.status();
  absl::StatusOr<std::vector<double>> b = mechanism.Distribution(x2);
  if (!b.ok()) return b.status();
  const double la = std::log(std::max((*a)[output], kAuditFloor));
  const double lb = std::log(std::max((*b)[output], kAuditFloor));
  return std::abs(la - lb) / *d;
}

std::vector<Point> SampleUniformPoints(const Box& box, size_t count,
                                       uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> points;
  points.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    std::vector<double> c(box.dim());
    for (size_t l = 0; l < box.dim(); ++l) {
      c[l] = box.lower[l] + UniformUnit(rng) * (box.upper[l] - box.lower[l]);
    }
    points.emplace_back(std::move(c));
  }
  return points;
}

absl::StatusOr<AuditReport> AuditPoints(const PerturbationMechanism& mechanism,
                                        const std::vector<Point>& points,
                                        const AuditOptions& options) {
  if (!(options.eps > 0.0)) {
    return absl::InvalidArgumentError("audit budget must be positive");
  }
  if (options.histogram_bins == 0) {
    return absl::InvalidArgumentError("histogram needs at least one bin");
  }
  const size_t n = points.size();
  const size_t K = mechanism.num_outputs();
  std::vector<std::vector<double>> logs(n);
  std::vector<absl::Status> errors(n);
  ParallelFor(n, options.threads, [&](size_t i) {
    absl::StatusOr<std::vector<double>> z = mechanism.Distribution(points[i]);
    if (!z.ok()) {
      errors[i] = z.status();
      return;
    }
    logs[i].resize(K);
    for (size_t k = 0; k < K; ++k) {
      logs[i][k] = std::log(std::max((*z)[k], kAuditFloor));
    }
  });
  for (const absl::Status& e : errors) {
    if (!e.ok()) return e;
  }

  const double threshold = options.eps * (1.0 + kAuditRelativeTolerance);
  const size_t nbins = options.histogram_bins;
  const double width = 2.0 * options.eps / nbins;
  std::vector<Partial> partial(n);
  ParallelFor(n, options.threads, [&](size_t i) {
    Partial& p = partial[i];
    p.bins.assign(nbins + 1, 0);
    for (size_t j = i + 1; j < n; ++j) {
      const double d = LpDistanceUnchecked(points[i].coords(),
                                           points[j].coords(), options.metric);
      if (d == 0.0) continue;
      double worst = 0.0;
      size_t worst_k = 0;
      for (size_t k = 0; k < K; ++k) {
        const double r = std::abs(logs[i][k] - logs[j][k]) / d;
        if (r > threshold) ++p.violating_outputs;
        if (r > worst) {
          worst = r;
          worst_k = k;
        }
      }
      ++p.pairs;
      p.pair_outputs += K;
      if (worst > threshold) ++p.violating;
      p.max_ppr = std::max(p.max_ppr, worst);
      const size_t bin = worst >= 2.0 * options.eps
                             ? nbins
                             : std::min(nbins - 1,
                                        static_cast<size_t>(worst / width));
      ++p.bins[bin];
      if (options.top_k > 0) {
        p.top.push_back({i, j, worst_k, worst});
        if (p.top.size() >= 4 * options.top_k) KeepTop(p.top, options.top_k);
      }
    }
    KeepTop(p.top, options.top_k);
  });

  AuditReport report;
  report.eps = options.eps;
  report.seed = options.seed;
  report.sampled_points = n;
  std::vector<uint64_t> bins(nbins + 1, 0);
  for (const Partial& p : partial) {
    report.pair_count += p.pairs;
    report.violating_pairs += p.violating;
    report.pair_output_count += p.pair_outputs;
    report.violating_pair_outputs += p.violating_outputs;
    report.max_ppr = std::max(report.max_ppr, p.max_ppr);
    for (size_t b = 0; b <= nbins; ++b) bins[b] += p.bins[b];
    report.offenders.insert(report.offenders.end(), p.top.begin(), p.top.end());
  }
  KeepTop(report.offenders, options.top_k);
  if (report.pair_count > 0) {
    report.violation_ratio =
        100.0 * static_cast<double>(report.violating_pairs) / report.pair_count;
    report.pair_output_violation_ratio =
        100.0 * static_cast<double>(report.violating_pair_outputs) /
        report.pair_output_count;
  }
  for (size_t b = 0; b < nbins; ++b) {
    report.histogram.push_back({b * width, (b + 1) * width, bins[b]});
  }
  report.histogram.push_back({2.0 * options.eps,
                              std::numeric_limits<double>::infinity(),
                              bins[nbins]});
  return report;
}

absl::StatusOr<AuditReport> RunAudit(const PerturbationMechanism& mechanism,
                                     const Box& domain,
                                     const AuditOptions& options) {
  if (absl::Status s = domain.Validate(); !s.ok()) return s;
  return AuditPoints(
      mechanism, SampleUniformPoints(domain, options.sample_count, options.seed),
      options);
}

std::string AuditReportToJson(const AuditReport& report) {
  nlohmann::ordered_json j;
  j["eps"] = report.eps;
  j["seed"] = report.seed;
  j["sampled_points"] = report.sampled_points;
  j["pair_count"] = report.pair_count;
  j["violating_pairs"] = report.violating_pairs;
  j["violation_ratio"] = report.violation_ratio;
  j["pair_output_count"] = report.pair_output_count;
  j["violating_pair_outputs"] = report.violating_pair_outputs;
  j["pair_output_violation_ratio"] = report.pair_output_violation_ratio;
  j["max_ppr"] = report.max_ppr;
  nlohmann::ordered_json offenders = nlohmann::ordered_json::array();
  for (const PairOffender& o : report.offenders) {
    offenders.push_back(
        {{"i", o.i}, {"j", o.j}, {"output", o.output}, {"ppr", o.ppr}});
  }
  j["top_offenders"] = offenders;
  return j.dump(2) + "\n";
}

void WriteHistogramCsv(const AuditReport& report, std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  for (const HistogramBin& b : report.histogram) {
    out << absl::StrFormat("%.17g,%s,%d\n", b.lo,
                           std::isinf(b.hi) ? std::string("inf")
                                            : absl::StrFormat("%.17g", b.hi),
                           b.count);
  }
}

}  // namespace mdp
