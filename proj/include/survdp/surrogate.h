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

#ifndef SURVDP_SURROGATE_H_
#define SURVDP_SURROGATE_H_

#include <cstdint>

#include "survdp/survival.h"

namespace survdp {

struct SurrogateConfig {
  std::int64_t n = 1;  // population size to spread over the bins
};

// Rebuilds a dataset from a probability vector assuming no censoring inside
// the study: round(y_j * n) events at each grid point t_j, and
// round(y_beyond * n) records censored at the last grid point. Rounding is
// half away from zero and the output size is not rebalanced to n.
SurvivalDataset generate_surrogate(const ProbMass& y,
                                   const SurrogateConfig& cfg);

}  // namespace survdp

#endif  // SURVDP_SURROGATE_H_
