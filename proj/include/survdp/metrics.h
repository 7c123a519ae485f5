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

#ifndef SURVDP_METRICS_H_
#define SURVDP_METRICS_H_

#include <array>
#include <optional>
#include <span>

#include "survdp/noise.h"
#include "survdp/survival.h"

namespace survdp {

// Standard normal quantile. Acklam's rational approximation refined by one
// Halley step against erfc; absolute error well below 1e-12 on (0, 1).
double normal_quantile(double p);

// P(|Z| >= |z|) for Z ~ N(0, 1).
double normal_two_sided_p(double z);

struct LogrankResult {
  double z = 0.0;
  double p_value = 1.0;
};

// Two-sample logrank test over the pooled distinct event times. Times with
// at most one subject at risk add nothing. Throws std::invalid_argument if
// either dataset is empty.
LogrankResult logrank(const SurvivalDataset& a, const SurvivalDataset& b);

// Greenwood variance S(t)^2 * sum_{t' <= t} d / (r (r - d)) on every grid
// point. Once a bin empties its risk set through events (r == d > 0) the
// variance is undefined there and afterwards and is reported as NaN.
Eigen::VectorXd greenwood_variance(const CountMatrix& counts, const KMCurve& s);

struct ConfidenceBand {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double alpha = 0.05;
};

// Exponential log-log band S^exp(+-z sigma / (S ln S)). Where S is 0 or 1, or
// the variance is undefined, the band collapses onto S.
ConfidenceBand ci_loglog(const KMCurve& s, const Eigen::VectorXd& variance,
                         double alpha);

struct MedianEstimate {
  std::optional<double> median;
  std::optional<double> lower;
  std::optional<double> upper;
};

// Smallest grid time with S <= 0.5; the interval comes from where the upper
// and lower band first reach 0.5.
MedianEstimate median_survival(const KMCurve& s);
MedianEstimate median_survival(const KMCurve& s, const ConfidenceBand& band);

// Median of the product-limit estimate on the raw (ungridded) event times:
// the smallest event time at which S <= 0.5.
std::optional<double> raw_median_survival(const SurvivalDataset& ds);

// Index of the largest grid point <= fraction * t_max.
Index survival_index(const TimeGrid& grid, double fraction);

// Step-function value of s at fraction * t_max, fraction in (0, 1).
double survival_at(const KMCurve& s, double fraction);

// Calibrated median difference |median - reference| / reference.
double cmd(double median, double reference);

struct BootstrapCI {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int resamples = 0;
};

// Percentile bootstrap of the sample mean: B resamples with replacement, CI
// from the alpha/2 and 1 - alpha/2 empirical quantiles (linear
// interpolation) of the resampled means.
BootstrapCI bootstrap_mean_ci(std::span<const double> samples, int resamples,
                              double alpha, NoiseSource& rng);

inline constexpr std::array<double, 3> kReportFractions = {0.25, 0.5, 0.75};

struct SurvivalPoint {
  double value = 1.0;
  double lower = 1.0;
  double upper = 1.0;
};

struct MetricReport {
  std::optional<double> p_value;  // logrank against the reference, if any
  MedianEstimate median;
  std::array<SurvivalPoint, 3> survival;  // at kReportFractions of t_max
};

// Everything a released dataset is judged by: its KM curve on `grid`,
// Greenwood log-log band, median with CI, survival at 25/50/75% of t_max and
// the logrank p-value against `reference` when one is given. The dataset must
// already lie on the grid.
MetricReport evaluate(const SurvivalDataset& ds, const TimeGrid& grid,
                      const SurvivalDataset* reference, double alpha = 0.05);

}  // namespace survdp

#endif  // SURVDP_METRICS_H_
