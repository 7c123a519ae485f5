// Copyright 2026 The survdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "survdp/surrogate.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace survdp {

SurvivalDataset generate_surrogate(const ProbMass& y,
                                   const SurrogateConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("surrogate: n must be >= 1");
  const TimeGrid& grid = y.grid();
  const double n = static_cast<double>(cfg.n);
  auto count = [n](double p) {
    // Negative mass maps to zero records.
    return static_cast<std::size_t>(std::max(0.0, std::round(p * n)));
  };

  SurvivalDataset out;
  for (Index j = 0; j < grid.size(); ++j) {
    out.insert(out.end(), count(y[j]), {grid.point(j), true});
  }
  out.insert(out.end(), count(y.beyond_study()), {grid.last_point(), false});
  return out;
}

}  // namespace survdp
