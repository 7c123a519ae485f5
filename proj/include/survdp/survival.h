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

// Exact (non-private) survival representations on an equidistant time grid
// and the lossless conversions between them:
//
//   dataset --count_events--> CountMatrix --km_estimate--> KMCurve
//   KMCurve <--km_to_prob / prob_to_km--> ProbMass
//   CountMatrix --counts_to_dataset--> dataset
//
// All types are immutable values; all operations are pure.

#ifndef SURVDP_SURVIVAL_H_
#define SURVDP_SURVIVAL_H_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace survdp {

using Index = Eigen::Index;

struct SurvivalRecord {
  double time = 0.0;
  bool event = false;  // false: right-censored

  bool operator==(const SurvivalRecord&) const = default;
};

// Record order carries no meaning; functions treat datasets as multisets.
using SurvivalDataset = std::vector<SurvivalRecord>;

// Number of records with event == false.
std::int64_t censored_count(const SurvivalDataset& ds);

// Equidistant grid t_j = j * b for j = 0 .. T-1 with T = ceil(t_max / b) + 1,
// so that t_{T-1} >= t_max > t_{T-2}.
class TimeGrid {
 public:
  // Throws std::invalid_argument unless t_max > 0 and bin_size > 0.
  TimeGrid(double t_max, double bin_size);

  double bin_size() const { return bin_size_; }
  double t_max() const { return t_max_; }
  // Number of grid points T, including t_0 = 0.
  Index size() const { return size_; }

  double point(Index j) const { return static_cast<double>(j) * bin_size_; }
  double last_point() const { return point(size_ - 1); }
  Eigen::VectorXd points() const;

  // Index of the smallest grid point >= t (right-closed bins). Returns
  // size() when t lies beyond the last grid point.
  Index bin_of(double t) const;

  // Index of a time that already sits on the grid. Throws
  // std::invalid_argument for off-grid or out-of-range times.
  Index index_of(double grid_time) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_max_;
  double bin_size_;
  Index size_;
};

TimeGrid build_grid(double t_max, double bin_size);

// Kaplan-Meier values sampled on every grid point.
class KMCurve {
 public:
  KMCurve(TimeGrid grid, Eigen::VectorXd values);

  const TimeGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](Index j) const { return values_[j]; }
  Index size() const { return values_.size(); }

 private:
  TimeGrid grid_;
  Eigen::VectorXd values_;
};

// Event probability per grid point plus one trailing element holding the
// probability of an event beyond the last grid point; length T + 1.
class ProbMass {
 public:
  ProbMass(TimeGrid grid, Eigen::VectorXd values);

  const TimeGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](Index j) const { return values_[j]; }
  Index size() const { return values_.size(); }
  double beyond_study() const { return values_[values_.size() - 1]; }

 private:
  TimeGrid grid_;
  Eigen::VectorXd values_;
};

// Initial risk set r0 plus per-bin event (d) and censoring (c) counts.
// Noisy matrices may hold non-integer entries until post-processed.
class CountMatrix {
 public:
  CountMatrix(TimeGrid grid, std::int64_t r0, Eigen::VectorXd events,
              Eigen::VectorXd censored);

  const TimeGrid& grid() const { return grid_; }
  std::int64_t r0() const { return r0_; }
  const Eigen::VectorXd& events() const { return events_; }
  const Eigen::VectorXd& censored() const { return censored_; }

  // r_0 = r0, r_j = r_{j-1} - (d_{j-1} + c_{j-1}).
  Eigen::VectorXd risk_sets() const;

 private:
  TimeGrid grid_;
  std::int64_t r0_;
  Eigen::VectorXd events_;
  Eigen::VectorXd censored_;
};

// Maps each raw time onto the grid: t > 0 goes to the smallest grid point
// >= t, t = 0 goes to t_1, and records beyond t_max are clamped to the last
// grid point and marked censored. Throws on negative times.
SurvivalDataset discretize(const SurvivalDataset& ds, const TimeGrid& grid);

// Requires every record time to be a grid point.
CountMatrix count_events(const SurvivalDataset& ds, const TimeGrid& grid);

// Product-limit estimate; bins with an empty risk set contribute a factor of
// 1, so the curve freezes once everybody has left.
KMCurve km_estimate(const CountMatrix& counts);

KMCurve prob_to_km(const ProbMass& y);
ProbMass km_to_prob(const KMCurve& s);

// Expands counts (rounded to the nearest integer) into records. Throws on
// negative entries.
SurvivalDataset counts_to_dataset(const CountMatrix& counts);

}  // namespace survdp

#endif  // SURVDP_SURVIVAL_H_
