// Copyright 2026 The sideobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>

#include "sideobs/error.hpp"
#include "sideobs/graph.hpp"

namespace sideobs {

ObservationGraph gen_grid_geometric(std::size_t k, GridRule rule, GridSpacing spacing) {
  require(k >= 1, ErrorCode::kInvalidParameter, "grid side must be at least 1");
  if (spacing == GridSpacing::kDefault) {
    spacing = rule == GridRule::kInvOnePlusD2 ? GridSpacing::kUnitSquare
                                              : GridSpacing::kUnit;
  }
  const double h = (spacing == GridSpacing::kUnit || k == 1)
                       ? 1.0
                       : 1.0 / static_cast<double>(k - 1);
  const std::size_t n = k * k;
  std::vector<double> w(n * n, 1.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      // Integer offsets keep symmetric pairs bit-identical.
      const double dx = static_cast<double>(a / k) - static_cast<double>(b / k);
      const double dy = static_cast<double>(a % k) - static_cast<double>(b % k);
      const double d2 = (dx * dx + dy * dy) * h * h;
      w[a * n + b] = rule == GridRule::kInvOnePlusD2 ? 1.0 / (1.0 + d2)
                                                     : std::min(3.0 / d2, 1.0);
    }
  }
  return ObservationGraph(n, std::move(w));
}

ObservationGraph gen_random_uniform(std::size_t n, double lo, double hi, Rng& rng) {
  require(n >= 1, ErrorCode::kInvalidParameter, "graph needs at least one node");
  require(0.0 <= lo && lo <= hi && hi <= 1.0, ErrorCode::kInvalidParameter,
          "weight range must satisfy 0 <= lo <= hi <= 1");
  std::vector<double> w(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      w[i * n + j] = std::min(hi, lo + (hi - lo) * uniform01(rng));
    }
  }
  return ObservationGraph(n, std::move(w));
}

}  // namespace sideobs
