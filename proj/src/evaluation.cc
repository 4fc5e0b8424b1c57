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

#include "mdp/evaluation.h"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mdp/parallel.h"

namespace mdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double PairwiseSumRange(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const size_t half = v.size() / 2;
  return PairwiseSumRange(v.first(half)) + PairwiseSumRange(v.subspan(half));
}

}  // namespace

absl::StatusOr<RoadGraph> RoadGraph::Create(std::vector<Point> nodes,
                                            std::vector<GraphEdge> edges) {
  RoadGraph g;
  const int n = static_cast<int>(nodes.size());
  g.adjacency_.resize(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    const GraphEdge& e = edges[i];
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      return absl::InvalidArgumentError(
          absl::StrCat("edge ", i, " references a missing node"));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      return absl::InvalidArgumentError(
          absl::StrCat("edge ", i, " has a non-positive weight"));
    }
    g.adjacency_[e.u].emplace_back(e.v, e.weight);
    g.adjacency_[e.v].emplace_back(e.u, e.weight);
  }
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  return g;
}

absl::StatusOr<std::vector<double>> ShortestPaths(const RoadGraph& graph,
                                                  int source) {
  if (source < 0 || static_cast<size_t>(source) >= graph.num_nodes()) {
    return absl::InvalidArgumentError(absl::StrCat("invalid node id ", source));
  }
  std::vector<double> dist(graph.num_nodes(), kInf);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : graph.Neighbors(u)) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        heap.emplace(dist[v], v);
      }
    }
  }
  return dist;
}

int NearestNode(const RoadGraph& graph, const Point& x) {
  int best = -1;
  double best_d = kInf;
  for (size_t i = 0; i < graph.num_nodes(); ++i) {
    const double d =
        LpDistanceUnchecked(graph.nodes()[i].coords(), x.coords(), Metric::L2());
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

absl::StatusOr<TaskLoss> TaskLoss::Create(const RoadGraph& graph,
                                          TaskSet tasks) {
  if (tasks.nodes.empty() || tasks.nodes.size() != tasks.weight.size()) {
    return absl::InvalidArgumentError("task set must be non-empty and weighted");
  }
  double total = 0.0;
  for (double w : tasks.weight) {
    if (!(w >= 0.0)) {
      return absl::InvalidArgumentError("task weights must be non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrFormat("task weights sum to %.17g, not 1", total));
  }
  std::vector<std::vector<double>> dist;
  for (int t : tasks.nodes) {
    absl::StatusOr<std::vector<double>> d = ShortestPaths(graph, t);
    if (!d.ok()) return d.status();
    dist.push_back(*std::move(d));
  }
  return TaskLoss(graph, std::move(tasks), std::move(dist));
}

absl::StatusOr<double> TaskLoss::NodeLoss(int a, int b) const {
  const int n = static_cast<int>(graph_.num_nodes());
  if (a < 0 || a >= n || b < 0 || b >= n) {
    return absl::InvalidArgumentError("invalid node id");
  }
  double total = 0.0;
  for (size_t t = 0; t < tasks_.nodes.size(); ++t) {
    const double da = dist_[t][a];
    const double db = dist_[t][b];
    if (std::isinf(da) && std::isinf(db)) continue;
    if (std::isinf(da) || std::isinf(db)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "task node ", tasks_.nodes[t], " is reachable from only one of nodes ",
          a, " and ", b));
    }
    total += tasks_.weight[t] * std::abs(da - db);
  }
  return total;
}

absl::StatusOr<double> TaskLoss::Loss(const Point& x, const Point& y) const {
  if (x.dim() != 2 || y.dim() != 2) {
    return absl::InvalidArgumentError("task loss needs planar points");
  }
  return NodeLoss(NearestNode(graph_, x), NearestNode(graph_, y));
}

absl::StatusOr<Matrix> BuildLossMatrix(const TaskLoss& loss,
                                       const std::vector<Point>& samples,
                                       const OutputDomain& outputs) {
  Matrix m(samples.size(), outputs.size());
  for (size_t s = 0; s < samples.size(); ++s) {
    for (size_t k = 0; k < outputs.size(); ++k) {
      absl::StatusOr<double> v = loss.Loss(samples[s], outputs.candidates[k]);
      if (!v.ok()) return v.status();
      m(s, k) = *v;
    }
  }
  return m;
}

double PairwiseSum(std::span<const double> values) {
  return PairwiseSumRange(values);
}

absl::StatusOr<double> ExpectedLoss(const PerturbationMechanism& mechanism,
                                    const PriorModel& prior, const Matrix& loss,
                                    int threads) {
  if (loss.rows() != prior.size() || loss.cols() != mechanism.num_outputs() ||
      prior.mass.size() != prior.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "loss matrix ", loss.rows(), "x", loss.cols(), " does not match ",
        prior.size(), " prior points and ", mechanism.num_outputs(),
        " outputs"));
  }
  std::vector<double> terms(prior.size(), 0.0);
  std::vector<absl::Status> errors(prior.size());
  ParallelFor(prior.size(), threads, [&](size_t s) {
    absl::StatusOr<std::vector<double>> z =
        mechanism.Distribution(prior.points[s]);
    if (!z.ok()) {
      errors[s] = z.status();
      return;
    }
    double row = 0.0;
    for (size_t k = 0; k < z->size(); ++k) row += (*z)[k] * loss(s, k);
    terms[s] = prior.mass[s] * row;
  });
  for (const absl::Status& e : errors) {
    if (!e.ok()) return e;
  }
  return PairwiseSum(terms);
}

absl::StatusOr<double> ExpectedLossOfRows(const Matrix& rows,
                                          const PriorModel& prior,
                                          const Matrix& loss) {
  if (rows.rows() != prior.size() || loss.rows() != prior.size() ||
      rows.cols() != loss.cols()) {
    return absl::InvalidArgumentError("row table, prior and loss disagree");
  }
  std::vector<double> terms(prior.size(), 0.0);
  for (size_t s = 0; s < prior.size(); ++s) {
    double row = 0.0;
    for (size_t k = 0; k < rows.cols(); ++k) row += rows(s, k) * loss(s, k);
    terms[s] = prior.mass[s] * row;
  }
  return PairwiseSum(terms);
}

}  // namespace mdp
