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

// Road graphs, task-based loss and the expected loss of a mechanism.

#ifndef MDP_EVALUATION_H_
#define MDP_EVALUATION_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mdp/geometry.h"
#include "mdp/matrix.h"
#include "mdp/model.h"

namespace mdp {

struct GraphEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

// Undirected graph with planar node positions and positive edge lengths.
class RoadGraph {
 public:
  static absl::StatusOr<RoadGraph> Create(std::vector<Point> nodes,
                                          std::vector<GraphEdge> edges);

  size_t num_nodes() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::pair<int, double>>& Neighbors(int node) const {
    return adjacency_[node];
  }

 private:
  std::vector<Point> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

// Dijkstra from `source`; unreachable nodes get +inf.
absl::StatusOr<std::vector<double>> ShortestPaths(const RoadGraph& graph,
                                                  int source);

// Node closest to x in Euclidean distance, ties to the lowest index.
int NearestNode(const RoadGraph& graph, const Point& x);

struct TaskSet {
  std::vector<int> nodes;
  std::vector<double> weight;  // sums to 1
};

// L(x, y) = sum_t p(t) |path(x, t) - path(y, t)| with x and y snapped to
// their nearest nodes.
class TaskLoss {
 public:
  static absl::StatusOr<TaskLoss> Create(const RoadGraph& graph,
                                         TaskSet tasks);

  absl::StatusOr<double> NodeLoss(int a, int b) const;
  absl::StatusOr<double> Loss(const Point& x, const Point& y) const;

  const TaskSet& tasks() const { return tasks_; }

 private:
  TaskLoss(const RoadGraph& graph, TaskSet tasks,
           std::vector<std::vector<double>> dist)
      : graph_(graph), tasks_(std::move(tasks)), dist_(std::move(dist)) {}

  RoadGraph graph_;
  TaskSet tasks_;
  std::vector<std::vector<double>> dist_;  // per task, to every node
};

// Loss matrix over prior samples x outputs.
absl::StatusOr<Matrix> BuildLossMatrix(const TaskLoss& loss,
                                       const std::vector<Point>& samples,
                                       const OutputDomain& outputs);

// Sum in a fixed pairwise tree order.
double PairwiseSum(std::span<const double> values);

// sum_s p(s) sum_k z(k | x_s) L(s, k).
absl::StatusOr<double> ExpectedLoss(const PerturbationMechanism& mechanism,
                                    const PriorModel& prior, const Matrix& loss,
                                    int threads = 1);

// Same, with the conditional distributions given row by row.
absl::StatusOr<double> ExpectedLossOfRows(const Matrix& rows,
                                          const PriorModel& prior,
                                          const Matrix& loss);

}  // namespace mdp

#endif  // MDP_EVALUATION_H_
