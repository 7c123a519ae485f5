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

#include "survdp/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace survdp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double acklam_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) return -acklam_quantile(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::optional<double> first_time_at_or_below_half(const TimeGrid& grid,
                                                  const Eigen::VectorXd& v) {
  for (Index j = 0; j < v.size(); ++j) {
    if (v[j] <= 0.5) return grid.point(j);
  }
  return std::nullopt;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  }
  double x = acklam_quantile(p);
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2);
  x -= u / (1.0 + x * u / 2.0);
  return x;
}

double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

LogrankResult logrank(const SurvivalDataset& a, const SurvivalDataset& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("logrank: both datasets must be nonempty");
  }
  struct Entry {
    double time;
    int group;
    bool event;
  };
  std::vector<Entry> all;
  all.reserve(a.size() + b.size());
  for (const auto& r : a) all.push_back({r.time, 0, r.event});
  for (const auto& r : b) all.push_back({r.time, 1, r.event});
  std::sort(all.begin(), all.end(),
            [](const Entry& x, const Entry& y) { return x.time < y.time; });

  double at_risk[2] = {static_cast<double>(a.size()),
                       static_cast<double>(b.size())};
  double observed_minus_expected = 0.0;
  double variance = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    double deaths[2] = {0.0, 0.0};
    double removed[2] = {0.0, 0.0};
    std::size_t j = i;
    for (; j < all.size() && all[j].time == all[i].time; ++j) {
      removed[all[j].group] += 1.0;
      if (all[j].event) deaths[all[j].group] += 1.0;
    }
    const double r = at_risk[0] + at_risk[1];
    const double d = deaths[0] + deaths[1];
    if (d > 0.0 && r > 1.0) {
      observed_minus_expected += deaths[0] - at_risk[0] * d / r;
      variance += at_risk[0] * at_risk[1] * d * (r - d) / (r * r * (r - 1.0));
    }
    at_risk[0] -= removed[0];
    at_risk[1] -= removed[1];
    i = j;
  }

  if (!(variance > 0.0)) {
    if (observed_minus_expected == 0.0) return {0.0, 1.0};
    const double z = std::copysign(std::numeric_limits<double>::infinity(),
                                   observed_minus_expected);
    return {z, 0.0};
  }
  const double z = observed_minus_expected / std::sqrt(variance);
  return {z, normal_two_sided_p(z)};
}

Eigen::VectorXd greenwood_variance(const CountMatrix& counts,
                                   const KMCurve& s) {
  if (!(counts.grid() == s.grid())) {
    throw std::invalid_argument("greenwood_variance: grid mismatch");
  }
  const Eigen::VectorXd r = counts.risk_sets();
  const Eigen::VectorXd& d = counts.events();
  Eigen::VectorXd v(r.size());
  double sum = 0.0;
  bool defined = true;
  for (Index j = 0; j < r.size(); ++j) {
    if (defined && d[j] > 0.0) {
      if (r[j] > d[j]) {
        sum += d[j] / (r[j] * (r[j] - d[j]));
      } else {
        defined = false;
      }
    }
    v[j] = defined ? s[j] * s[j] * sum : kNaN;
  }
  return v;
}

ConfidenceBand ci_loglog(const KMCurve& s, const Eigen::VectorXd& variance,
                         double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ci_loglog: alpha must lie in (0, 1)");
  }
  if (variance.size() != s.size()) {
    throw std::invalid_argument("ci_loglog: variance length mismatch");
  }
  const double z = normal_quantile(1.0 - alpha / 2.0);
  ConfidenceBand band{s.values(), s.values(), alpha};
  for (Index j = 0; j < s.size(); ++j) {
    const double sj = s[j];
    if (!(sj > 0.0 && sj < 1.0) || std::isnan(variance[j])) continue;
    const double theta = z * std::sqrt(variance[j]) / (sj * std::log(sj));
    const double a = std::pow(sj, std::exp(theta));
    const double b = std::pow(sj, std::exp(-theta));
    band.lower[j] = std::min(a, b);
    band.upper[j] = std::max(a, b);
  }
  return band;
}

MedianEstimate median_survival(const KMCurve& s) {
  return {first_time_at_or_below_half(s.grid(), s.values()), std::nullopt,
          std::nullopt};
}

MedianEstimate median_survival(const KMCurve& s, const ConfidenceBand& band) {
  MedianEstimate m = median_survival(s);
  m.lower = first_time_at_or_below_half(s.grid(), band.lower);
  m.upper = first_time_at_or_below_half(s.grid(), band.upper);
  return m;
}

std::optional<double> raw_median_survival(const SurvivalDataset& ds) {
  SurvivalDataset sorted = ds;
  std::sort(sorted.begin(), sorted.end(),
            [](const SurvivalRecord& x, const SurvivalRecord& y) {
              return x.time < y.time;
            });
  double at_risk = static_cast<double>(sorted.size());
  double s = 1.0;
  for (std::size_t i = 0; i < sorted.size();) {
    double deaths = 0.0;
    std::size_t j = i;
    for (; j < sorted.size() && sorted[j].time == sorted[i].time; ++j) {
      if (sorted[j].event) deaths += 1.0;
    }
    if (deaths > 0.0) {
      s *= (at_risk - deaths) / at_risk;
      if (s <= 0.5) return sorted[i].time;
    }
    at_risk -= static_cast<double>(j - i);
    i = j;
  }
  return std::nullopt;
}

Index survival_index(const TimeGrid& grid, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("survival_at: fraction must lie in (0, 1)");
  }
  const double q = fraction * grid.t_max() / grid.bin_size();
  const auto j = static_cast<Index>(std::floor(q + 1e-9 * std::max(1.0, q)));
  return std::clamp<Index>(j, 0, grid.size() - 1);
}

double survival_at(const KMCurve& s, double fraction) {
  return s[survival_index(s.grid(), fraction)];
}

double cmd(double median, double reference) {
  if (!(reference > 0.0)) {
    throw std::invalid_argument("cmd: reference median must be positive");
  }
  return std::abs(median - reference) / reference;
}

BootstrapCI bootstrap_mean_ci(std::span<const double> samples, int resamples,
                              double alpha, NoiseSource& rng) {
  if (samples.empty()) {
    throw std::invalid_argument("bootstrap: samples must be nonempty");
  }
  if (resamples < 1) {
    throw std::invalid_argument("bootstrap: need at least one resample");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("bootstrap: alpha must lie in (0, 1)");
  }
  const std::size_t n = samples.size();
  auto mean_of = [n](auto&& value_at) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += value_at(i);
    return sum / static_cast<double>(n);
  };
  const double mean = mean_of([&](std::size_t i) { return samples[i]; });

  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (double& m : means) {
    m = mean_of([&](std::size_t) { return samples[rng.uniform_index(n)]; });
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&means](double p) {
    const double h = p * static_cast<double>(means.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, means.size() - 1);
    return means[lo] + (h - static_cast<double>(lo)) * (means[hi] - means[lo]);
  };
  BootstrapCI ci;
  ci.mean = mean;
  // A percentile interval from few resamples can miss the point estimate.
  ci.lower = std::min(quantile(alpha / 2.0), mean);
  ci.upper = std::max(quantile(1.0 - alpha / 2.0), mean);
  ci.resamples = resamples;
  return ci;
}

MetricReport evaluate(const SurvivalDataset& ds, const TimeGrid& grid,
                      const SurvivalDataset* reference, double alpha) {
  const CountMatrix counts = count_events(ds, grid);
  const KMCurve s = km_estimate(counts);
  const ConfidenceBand band =
      ci_loglog(s, greenwood_variance(counts, s), alpha);

  MetricReport report;
  if (reference != nullptr && !reference->empty() && !ds.empty()) {
    report.p_value = logrank(ds, *reference).p_value;
  }
  report.median = median_survival(s, band);
  for (std::size_t i = 0; i < kReportFractions.size(); ++i) {
    const Index j = survival_index(grid, kReportFractions[i]);
    report.survival[i] = {s[j], band.lower[j], band.upper[j]};
  }
  return report;
}

}  // namespace survdp
