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

// Small synthetic instances shared by the unit tests.

#ifndef MDP_TESTS_TEST_INSTANCES_H_
#define MDP_TESTS_TEST_INSTANCES_H_

#include <cstdint>
#include <random>

#include "mdp/synth.h"

namespace mdp::testing {

// A 2x2-cell instance with a 5x5 road grid and 4 outputs; cheap to solve.
inline SynthSpec SmallSpec(uint64_t seed) {
  SynthSpec spec;
  spec.extent_x = 4.0;
  spec.extent_y = 4.0;
  spec.cells_x = 2;
  spec.cells_y = 2;
  spec.samples_per_cell_axis = 2;
  spec.graph_nodes_per_axis = 5;
  spec.hotspots = 2;
  spec.outputs_per_axis = 2;
  spec.tasks = 8;
  spec.seed = seed;
  return spec;
}

// Varies extents, grid and output counts with the seed.
inline SynthSpec RandomSmallSpec(uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 13);
  std::uniform_real_distribution<double> extent(2.0, 6.0);
  std::uniform_int_distribution<int> cells(1, 3);
  std::uniform_int_distribution<int> outs(2, 3);
  SynthSpec spec = SmallSpec(seed);
  spec.extent_x = extent(rng);
  spec.extent_y = extent(rng);
  spec.cells_x = cells(rng);
  spec.cells_y = cells(rng);
  spec.outputs_per_axis = outs(rng);
  return spec;
}

}  // namespace mdp::testing

#endif  // MDP_TESTS_TEST_INSTANCES_H_
