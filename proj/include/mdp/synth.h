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

// Synthetic planar instances: a jittered grid road network, a hotspot prior
// sampled on a per-cell lattice, lattice output candidates and task-based
// losses. Also the on-disk instance bundle.

#ifndef MDP_SYNTH_H_
#define MDP_SYNTH_H_

#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mdp/evaluation.h"
#include "mdp/geometry.h"
#include "mdp/matrix.h"
#include "mdp/model.h"

namespace mdp {

struct SynthSpec {
  double extent_x = 8.0;  // km
  double extent_y = 8.0;
  int cells_x = 4;
  int cells_y = 4;
  int samples_per_cell_axis = 3;
  int graph_nodes_per_axis = 9;
  double edge_jitter = 0.3;  // weight = length * (1 + jitter * U[0,1))
  int hotspots = 3;
  double hotspot_sigma = 1.0;
  double hotspot_weight = 4.0;
  int outputs_per_axis = 3;
  int tasks = 20;
  uint64_t seed = 1;

  absl::Status Validate() const;
};

struct Instance {
  Box box;
  Partition partition;
  PriorModel prior;
  OutputDomain outputs;
  RoadGraph graph;
  TaskSet tasks;
  Matrix loss;  // prior samples x outputs
};

absl::StatusOr<Instance> SynthesizeInstance(const SynthSpec& spec);

// Directory with manifest.json, graph.txt, nodes.csv, prior.csv,
// outputs.csv, loss.csv and tasks.csv.
absl::Status WriteInstanceBundle(const Instance& instance,
                                 const std::string& dir);
absl::StatusOr<Instance> ReadInstanceBundle(const std::string& dir);

}  // namespace mdp

#endif  // MDP_SYNTH_H_
