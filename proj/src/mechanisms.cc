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

#include "survdp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "survdp/isotonic.h"
#include "survdp/spectral.h"

namespace survdp {
namespace {

void check_sensitivity_inputs(std::int64_t n, Index grid_size) {
  if (n < 1) throw std::invalid_argument("sensitivity: N must be >= 1");
  if (grid_size < 2) throw std::invalid_argument("sensitivity: T must be >= 2");
}

void check_mode(SensitivityMode mode, bool acknowledged) {
  if (mode == SensitivityMode::kWorstCaseCensoring && !acknowledged) {
    throw std::invalid_argument(
        "worst-case censoring sensitivity is not a DP guarantee; set "
        "acknowledge_non_dp to use it");
  }
}

}  // namespace

PrivacyBudget::PrivacyBudget(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

Sensitivity km_sensitivity(std::int64_t n, Index grid_size,
                           SensitivityMode mode) {
  check_sensitivity_inputs(n, grid_size);
  const double t = static_cast<double>(grid_size);
  if (mode == SensitivityMode::kWorstCaseCensoring) {
    // T C / N and sqrt(T) C / N with C = N.
    return {t, std::sqrt(t)};
  }
  const double nn = static_cast<double>(n);
  return {(t - 1.0) / nn, std::sqrt(t - 1.0) / nn};
}

Sensitivity prob_sensitivity(std::int64_t n, Index grid_size,
                             SensitivityMode mode) {
  check_sensitivity_inputs(n, grid_size);
  if (mode == SensitivityMode::kWorstCaseCensoring) {
    const double t = static_cast<double>(grid_size);
    return {t, std::sqrt(t)};
  }
  const double nn = static_cast<double>(n);
  return {2.0 / nn, std::sqrt(2.0) / nn};
}

Index kept_coefficients(double k_fraction, Index grid_size) {
  if (!(k_fraction > 0.0 && k_fraction <= 1.0)) {
    throw std::invalid_argument("k_fraction must lie in (0, 1]");
  }
  const auto k = static_cast<Index>(
      std::round(k_fraction * static_cast<double>(grid_size)));
  return std::clamp<Index>(k, 1, grid_size);
}

Eigen::VectorXd noisy_spectrum(const KMCurve& s, const DpSurvConfig& cfg,
                               NoiseSource& rng) {
  check_mode(cfg.mode, cfg.acknowledge_non_dp);
  const Index t = s.size();
  const Index k = kept_coefficients(cfg.k_fraction, t);
  const double l2 = km_sensitivity(cfg.n, t, cfg.mode).l2;
  // The L1 norm of k coefficients is at most sqrt(k) times their L2 norm.
  const double scale =
      std::sqrt(static_cast<double>(k)) * l2 / cfg.epsilon.epsilon();

  Eigen::VectorXd spectrum = truncate(dct_forward(s.values()), k);
  for (Index j = 0; j < k; ++j) spectrum[j] += laplace_sample(rng, scale);
  return spectrum;
}

KMCurve dp_surv(const KMCurve& s, const DpSurvConfig& cfg, NoiseSource& rng) {
  return KMCurve(s.grid(),
                 isotonic_project(dct_inverse(noisy_spectrum(s, cfg, rng))));
}

Eigen::VectorXd noisy_prob(const ProbMass& y, const DpProbConfig& cfg,
                           NoiseSource& rng) {
  check_mode(cfg.mode, cfg.acknowledge_non_dp);
  const Sensitivity sens = prob_sensitivity(cfg.n, y.grid().size(), cfg.mode);
  double l1 = sens.l1;
  if (cfg.rule == ProbSensitivityRule::kSqrtTwoOverN &&
      cfg.mode == SensitivityMode::kNoCensoring) {
    l1 = std::sqrt(2.0) / static_cast<double>(cfg.n);
  }
  const double scale = l1 / cfg.epsilon.epsilon();
  Eigen::VectorXd noisy = y.values();
  for (Index j = 0; j < noisy.size(); ++j)
    noisy[j] += laplace_sample(rng, scale);
  return noisy;
}

DpProbRelease dp_prob(const ProbMass& y, const DpProbConfig& cfg,
                      NoiseSource& rng) {
  const Eigen::VectorXd noisy = noisy_prob(y, cfg, rng).cwiseMax(0.0);
  const double total = noisy.sum();
  if (!(total > 0.0)) {
    Eigen::VectorXd fallback = Eigen::VectorXd::Zero(noisy.size());
    fallback[fallback.size() - 1] = 1.0;
    return {ProbMass(y.grid(), std::move(fallback)), true};
  }
  return {ProbMass(y.grid(), noisy / total), false};
}

CountMatrix postprocess_counts(const CountMatrix& noisy) {
  const Index t = noisy.grid().size();
  auto clean = [](double x) { return std::max(0.0, std::round(x)); };
  Eigen::VectorXd d = noisy.events().unaryExpr(clean);
  Eigen::VectorXd c = noisy.censored().unaryExpr(clean);

  double at_risk = static_cast<double>(noisy.r0());
  for (Index j = 0; j < t; ++j) {
    if (d[j] + c[j] <= at_risk) {
      at_risk -= d[j] + c[j];
      continue;
    }
    d[j] = std::min(d[j], at_risk);
    c[j] = at_risk - d[j];
    d.tail(t - j - 1).setZero();
    c.tail(t - j - 1).setZero();
    at_risk = 0.0;
    break;
  }
  c[t - 1] += at_risk;
  return CountMatrix(noisy.grid(), noisy.r0(), std::move(d), std::move(c));
}

CountMatrix noisy_counts(const CountMatrix& m, PrivacyBudget epsilon,
                         NoiseSource& rng) {
  const Index t = m.grid().size();
  const double scale = 2.0 / epsilon.epsilon();
  Eigen::VectorXd d = m.events();
  Eigen::VectorXd c = m.censored();
  for (Index j = 0; j < t; ++j) {
    d[j] += laplace_sample(rng, scale);
    c[j] += laplace_sample(rng, scale);
  }
  return CountMatrix(m.grid(), m.r0(), std::move(d), std::move(c));
}

CountMatrix dp_matrix(const CountMatrix& m, PrivacyBudget epsilon,
                      NoiseSource& rng) {
  return postprocess_counts(noisy_counts(m, epsilon, rng));
}

}  // namespace survdp
