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

// Epsilon-DP releases of the three survival representations under bounded
// DP (dataset size N is public):
//
//   dp_surv   - Laplace noise on the first k DCT coefficients of a KM curve,
//               inverse transform, isotonic projection into [0, 1].
//   dp_prob   - Laplace noise on every element of a probability vector,
//               clipped at 0 and renormalized.
//   dp_matrix - Laplace(2 / epsilon) on every per-bin event and censoring
//               count; r0 stays exact.
//
// The sensitivity formulas assume no censoring. WorstCaseCensoring plugs
// C = N into the censored-case bounds; those depend on the private count C
// and are therefore not a DP guarantee, so every entry point refuses that
// mode unless the caller sets `acknowledge_non_dp`.

#ifndef SURVDP_MECHANISMS_H_
#define SURVDP_MECHANISMS_H_

#include <cstdint>

#include "survdp/noise.h"
#include "survdp/survival.h"

namespace survdp {

class PrivacyBudget {
 public:
  // Throws std::invalid_argument unless epsilon > 0.
  explicit PrivacyBudget(double epsilon);
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

enum class SensitivityMode { kNoCensoring, kWorstCaseCensoring };

// L1 sensitivity of the probability vector under bounded DP: 2/N, or the
// tighter-looking sqrt(2)/N kept for comparison runs.
enum class ProbSensitivityRule { kTwoOverN, kSqrtTwoOverN };

struct Sensitivity {
  double l1;
  double l2;
};

// N >= 1 and grid size T >= 2.
Sensitivity km_sensitivity(std::int64_t n, Index grid_size,
                           SensitivityMode mode);
Sensitivity prob_sensitivity(std::int64_t n, Index grid_size,
                             SensitivityMode mode);

// Coefficients kept by dp_surv: max(1, round(k_fraction * T)), capped at T.
Index kept_coefficients(double k_fraction, Index grid_size);

struct DpSurvConfig {
  PrivacyBudget epsilon;
  double k_fraction = 0.1;
  std::int64_t n = 1;  // public dataset size
  SensitivityMode mode = SensitivityMode::kNoCensoring;
  bool acknowledge_non_dp = false;
};

// Draws exactly kept_coefficients() Laplace samples.
KMCurve dp_surv(const KMCurve& s, const DpSurvConfig& cfg, NoiseSource& rng);

struct DpProbConfig {
  PrivacyBudget epsilon;
  std::int64_t n = 1;
  SensitivityMode mode = SensitivityMode::kNoCensoring;
  ProbSensitivityRule rule = ProbSensitivityRule::kTwoOverN;
  bool acknowledge_non_dp = false;
};

struct DpProbRelease {
  ProbMass mass;
  // Every element clipped to zero; `mass` then puts all probability on the
  // beyond-study element.
  bool degenerate = false;
};

// Draws exactly T + 1 Laplace samples.
DpProbRelease dp_prob(const ProbMass& y, const DpProbConfig& cfg,
                      NoiseSource& rng);

// Noisy counts followed by post-processing: round half away from zero, clamp
// at 0, then walk the risk-set recursion; at the first bin whose removals
// exceed the remaining risk set, events then censorings are capped to what
// is left and every later count is zeroed. Whoever is still at risk after
// the last bin is recorded as censored there, so sum(d) + sum(c) = r0.
// Draws exactly 2T Laplace samples (d then c for each bin).
CountMatrix dp_matrix(const CountMatrix& m, PrivacyBudget epsilon,
                      NoiseSource& rng);

// The randomized stage of each mechanism, before any post-processing: the
// truncated DCT spectrum with noise on its first k entries, the noisy
// probability vector before clipping, and the noisy counts before rounding.
Eigen::VectorXd noisy_spectrum(const KMCurve& s, const DpSurvConfig& cfg,
                               NoiseSource& rng);
Eigen::VectorXd noisy_prob(const ProbMass& y, const DpProbConfig& cfg,
                           NoiseSource& rng);
CountMatrix noisy_counts(const CountMatrix& m, PrivacyBudget epsilon,
                         NoiseSource& rng);

// The deterministic half of dp_matrix.
CountMatrix postprocess_counts(const CountMatrix& noisy);

}  // namespace survdp

#endif  // SURVDP_MECHANISMS_H_
