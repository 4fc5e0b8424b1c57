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

#ifndef MDP_RANDOM_H_
#define MDP_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace mdp {

// Uniform double in [0, 1) from the top 53 bits of one draw. Identical on
// every platform, unlike std::uniform_real_distribution.
inline double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw over `probs` in stored order.
inline size_t SampleIndex(std::span<const double> probs, std::mt19937_64& rng) {
  const double u = UniformUnit(rng);
  double cum = 0.0;
  size_t last_positive = 0;
  for (size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    cum += probs[k];
    last_positive = k;
    if (u < cum) return k;
  }
  return last_positive;
}

}  // namespace mdp

#endif  // MDP_RANDOM_H_
