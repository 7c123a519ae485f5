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

// In-process simulation of K clients that each release a DP artifact and a
// central aggregator that combines them into one global surrogate dataset.
//
//   path  local mechanism  shared artifact       aggregation
//   A     dp_surv          surrogate dataset     pool
//   B     dp_surv          KM curve              weighted average
//   C     dp_surv          probability vector    weighted average
//   D     dp_prob          surrogate dataset     pool
//   E     dp_prob          KM curve              weighted average
//   F     dp_prob          probability vector    weighted average
//   M     dp_matrix        noisy-count dataset   pool
//
// Client sizes n_k are public (bounded DP) and set each client's
// sensitivity. Raw shards never leave Client: the aggregator only accepts
// Private<T> values, which only Client can mint.

#ifndef SURVDP_COLLAB_H_
#define SURVDP_COLLAB_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "survdp/mechanisms.h"
#include "survdp/metrics.h"
#include "survdp/noise.h"
#include "survdp/survival.h"

namespace survdp {

enum class PathId { kA, kB, kC, kD, kE, kF, kM };
enum class Mechanism { kDpSurv, kDpProb, kDpMatrix };
enum class Sharing { kPooledDataset, kAveragedKm, kAveragedProb };

inline constexpr std::array<PathId, 7> kAllPaths = {
    PathId::kA, PathId::kB, PathId::kC, PathId::kD,
    PathId::kE, PathId::kF, PathId::kM};

Mechanism mechanism_of(PathId path);
Sharing sharing_of(PathId path);
std::string_view path_name(PathId path);
std::optional<PathId> parse_path(std::string_view name);
std::string_view mechanism_name(Mechanism m);
std::optional<Mechanism> parse_mechanism(std::string_view name);
// The path a single data holder takes with `m` (pooling one client).
PathId centralized_path(Mechanism m);

struct Partition {
  std::vector<SurvivalDataset> shards;

  std::vector<std::int64_t> sizes() const;
  std::int64_t total() const;
};

// Fisher-Yates shuffle, then contiguous slices of floor(N / K), the first
// N mod K slices one record larger. Throws if K < 1 or K > N.
Partition split_even(const SurvivalDataset& ds, int clients, NoiseSource& rng);

// Shard 0 holds round(minority_fraction * N) records; the rest is split
// evenly over the other K - 1 clients. Throws if any shard would be empty.
Partition split_uneven(const SurvivalDataset& ds, int clients,
                       double minority_fraction, NoiseSource& rng);

// (1 / N) sum_k n_k S_k, clamped into [0, 1] and re-projected onto
// nonincreasing curves. Throws on grid mismatch or nonpositive weights.
KMCurve average_km(std::span<const KMCurve> curves,
                   std::span<const double> weights);

// (1 / N) sum_k n_k y_k.
ProbMass average_prob(std::span<const ProbMass> probs,
                      std::span<const double> weights);

SurvivalDataset pool_datasets(std::span<const SurvivalDataset> datasets);

// A value derived from a DP release. Transformations through then() are
// post-processing and stay private.
template <typename T>
class Private {
 public:
  const T& value() const { return value_; }

  template <typename F>
  auto then(F&& f) const {
    using U = std::decay_t<std::invoke_result_t<F, const T&>>;
    return Private<U>(std::forward<F>(f)(value_));
  }

 private:
  explicit Private(T value) : value_(std::move(value)) {}

  template <typename>
  friend class Private;
  friend class Client;

  T value_;
};

struct ClientMessage {
  std::int64_t size;  // public n_k
  std::variant<Private<SurvivalDataset>, Private<KMCurve>, Private<ProbMass>>
      payload;
  bool degenerate = false;  // dp_prob fell back to all mass beyond study
};

struct SplitSpec {
  // Empty: even split. Otherwise the share of the single minority client.
  std::optional<double> minority_fraction;
};

struct CollabConfig {
  CollabConfig(TimeGrid grid, PrivacyBudget epsilon)
      : grid(std::move(grid)), epsilon(epsilon) {}

  TimeGrid grid;
  PrivacyBudget epsilon;
  double k_fraction = 0.1;
  SensitivityMode sensitivity_mode = SensitivityMode::kNoCensoring;
  bool acknowledge_non_dp = false;
  ProbSensitivityRule prob_rule = ProbSensitivityRule::kTwoOverN;
  // Surrogate sizes; default to n_k locally and N for the global dataset.
  std::optional<std::int64_t> client_surrogate_n;
  std::optional<std::int64_t> global_surrogate_n;
  double alpha = 0.05;

  // Monte-Carlo experiment settings.
  int clients = 10;
  SplitSpec split;
  int runs = 100;
  std::uint64_t master_seed = 0;
  bool resplit_per_run = false;
  int bootstrap_resamples = 10000;
  int threads = 0;  // 0: hardware concurrency
};

class Client {
 public:
  // The shard is discretized onto the configured grid at release time.
  explicit Client(SurvivalDataset shard);

  std::int64_t size() const { return static_cast<std::int64_t>(shard_.size()); }

  ClientMessage release(PathId path, const CollabConfig& cfg,
                        NoiseSource& rng) const;

 private:
  SurvivalDataset shard_;
};

// Combines client messages into the global surrogate dataset, a function of
// the released artifacts only. Throws std::invalid_argument if a message
// does not fit the path.
SurvivalDataset aggregate(PathId path, std::span<const ClientMessage> messages,
                          const CollabConfig& cfg);

struct RunResult {
  KMCurve global_curve;  // KM of the global surrogate
  SurvivalDataset global_surrogate;
  MetricReport report;
  int degenerate_releases = 0;
};

// One end-to-end run. Client c draws from NoiseSource(derive_seed(run_seed,
// c)). Metrics compare the global surrogate to `reference`.
RunResult run_path(PathId path, const Partition& part, const CollabConfig& cfg,
                   const SurvivalDataset& reference, std::uint64_t run_seed);

enum MetricId { kPValue = 0, kMedian, kS25, kS50, kS75, kMetricCount };
inline constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "p_value", "median", "s25", "s50", "s75"};

struct MetricSummary {
  std::vector<double> samples;  // runs where the metric was defined
  int undefined = 0;
  std::optional<BootstrapCI> ci;
};

struct ExperimentResult {
  PathId path;
  std::vector<MetricReport> reports;  // by run index
  std::array<MetricSummary, kMetricCount> metrics;
  int degenerate_releases = 0;
};

// The partition monte_carlo shares across runs: the raw records of `data`
// split per cfg from a stream derived from cfg.master_seed. Clients
// discretize their own shards.
Partition shared_partition(const SurvivalDataset& data,
                           const CollabConfig& cfg);

// R runs of run_path. Run r uses seed derive_seed(master_seed, r); the
// partition is drawn once from a dedicated stream unless resplit_per_run.
// Results depend only on (inputs, cfg), never on scheduling;
// `execution_order`, when given, is the order in which runs are started.
ExperimentResult monte_carlo(PathId path, const SurvivalDataset& data,
                             const SurvivalDataset& reference,
                             const CollabConfig& cfg,
                             std::span<const int> execution_order = {});

}  // namespace survdp

#endif  // SURVDP_COLLAB_H_
