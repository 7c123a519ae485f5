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

#include "survdp/survival.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace survdp {
namespace {

// Relative slack for quotients such as 0.3 / 0.1 that should be integral.
constexpr double kGridSlack = 1e-9;

bool near_integer(double q, double* rounded) {
  *rounded = std::round(q);
  return std::abs(q - *rounded) <= kGridSlack * std::max(1.0, std::abs(q));
}

Index tolerant_ceil(double q) {
  double r;
  if (near_integer(q, &r)) return static_cast<Index>(r);
  return static_cast<Index>(std::ceil(q));
}

}  // namespace

std::int64_t censored_count(const SurvivalDataset& ds) {
  return std::count_if(ds.begin(), ds.end(),
                       [](const SurvivalRecord& r) { return !r.event; });
}

TimeGrid::TimeGrid(double t_max, double bin_size)
    : t_max_(t_max), bin_size_(bin_size), size_(0) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("grid: t_max must be positive and finite");
  }
  if (!(bin_size > 0.0) || !std::isfinite(bin_size)) {
    throw std::invalid_argument("grid: bin size must be positive and finite");
  }
  size_ = tolerant_ceil(t_max / bin_size) + 1;
}

Eigen::VectorXd TimeGrid::points() const {
  return Eigen::VectorXd::LinSpaced(size_, 0.0, last_point());
}

Index TimeGrid::bin_of(double t) const {
  if (t <= 0.0) return 0;
  return std::min<Index>(tolerant_ceil(t / bin_size_), size_);
}

Index TimeGrid::index_of(double grid_time) const {
  double r;
  if (!near_integer(grid_time / bin_size_, &r) || r < 0 ||
      r >= static_cast<double>(size_)) {
    throw std::invalid_argument("time " + std::to_string(grid_time) +
                                " is not a point of the grid");
  }
  return static_cast<Index>(r);
}

TimeGrid build_grid(double t_max, double bin_size) {
  return TimeGrid(t_max, bin_size);
}

KMCurve::KMCurve(TimeGrid grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("KM curve length must equal the grid size");
  }
}

ProbMass::ProbMass(TimeGrid grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size() + 1) {
    throw std::invalid_argument(
        "probability vector length must equal the grid size plus one");
  }
}

CountMatrix::CountMatrix(TimeGrid grid, std::int64_t r0, Eigen::VectorXd events,
                         Eigen::VectorXd censored)
    : grid_(grid),
      r0_(r0),
      events_(std::move(events)),
      censored_(std::move(censored)) {
  if (r0_ < 0) throw std::invalid_argument("count matrix: r0 must be >= 0");
  if (events_.size() != grid_.size() || censored_.size() != grid_.size()) {
    throw std::invalid_argument(
        "count matrix: d and c must have one entry per grid point");
  }
}

Eigen::VectorXd CountMatrix::risk_sets() const {
  Eigen::VectorXd r(grid_.size());
  double at_risk = static_cast<double>(r0_);
  for (Index j = 0; j < r.size(); ++j) {
    r[j] = at_risk;
    at_risk -= events_[j] + censored_[j];
  }
  return r;
}

SurvivalDataset discretize(const SurvivalDataset& ds, const TimeGrid& grid) {
  SurvivalDataset out;
  out.reserve(ds.size());
  for (const SurvivalRecord& rec : ds) {
    if (rec.time < 0.0 || std::isnan(rec.time)) {
      throw std::invalid_argument("discretize: negative survival time");
    }
    if (rec.time > grid.t_max()) {
      out.push_back({grid.last_point(), false});
      continue;
    }
    // No event may happen at t_0; those records move to the first bin.
    const Index j = std::max<Index>(grid.bin_of(rec.time), 1);
    out.push_back({grid.point(j), rec.event});
  }
  return out;
}

CountMatrix count_events(const SurvivalDataset& ds, const TimeGrid& grid) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(grid.size());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(grid.size());
  for (const SurvivalRecord& rec : ds) {
    const Index j = grid.index_of(rec.time);
    (rec.event ? d : c)[j] += 1.0;
  }
  return CountMatrix(grid, static_cast<std::int64_t>(ds.size()), std::move(d),
                     std::move(c));
}

KMCurve km_estimate(const CountMatrix& counts) {
  const Eigen::VectorXd r = counts.risk_sets();
  const Eigen::VectorXd& d = counts.events();
  Eigen::VectorXd s(r.size());
  double running = 1.0;
  for (Index j = 0; j < r.size(); ++j) {
    if (r[j] > 0.0) running *= (r[j] - d[j]) / r[j];
    s[j] = running;
  }
  return KMCurve(counts.grid(), std::move(s));
}

ProbMass km_to_prob(const KMCurve& s) {
  const Index t = s.size();
  Eigen::VectorXd y(t + 1);
  y[0] = 0.0;
  for (Index j = 1; j < t; ++j) y[j] = s[j - 1] - s[j];
  y[t] = 1.0 - y.head(t).sum();
  return ProbMass(s.grid(), std::move(y));
}

KMCurve prob_to_km(const ProbMass& y) {
  const Index t = y.grid().size();
  Eigen::VectorXd s(t);
  double cumulative = 0.0;
  for (Index j = 0; j < t; ++j) {
    cumulative += y[j];
    s[j] = 1.0 - cumulative;
  }
  return KMCurve(y.grid(), std::move(s));
}

SurvivalDataset counts_to_dataset(const CountMatrix& counts) {
  const TimeGrid& grid = counts.grid();
  SurvivalDataset out;
  for (Index j = 0; j < grid.size(); ++j) {
    const double d = std::round(counts.events()[j]);
    const double c = std::round(counts.censored()[j]);
    if (d < 0.0 || c < 0.0) {
      throw std::invalid_argument("counts_to_dataset: negative count");
    }
    out.insert(out.end(), static_cast<std::size_t>(d), {grid.point(j), true});
    out.insert(out.end(), static_cast<std::size_t>(c), {grid.point(j), false});
  }
  return out;
}

}  // namespace survdp
