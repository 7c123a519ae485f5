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

#include "survdp/collab.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "survdp/isotonic.h"
#include "survdp/surrogate.h"

namespace survdp {
namespace {

constexpr std::uint64_t kSplitStream = ~0ULL;
constexpr std::uint64_t kBootstrapStream = ~1ULL;

void shuffle(SurvivalDataset& ds, NoiseSource& rng) {
  for (std::size_t i = ds.size(); i > 1; --i) {
    std::swap(ds[i - 1], ds[rng.uniform_index(i)]);
  }
}

void append_even_slices(const SurvivalDataset& ds, std::size_t begin,
                        int clients, std::vector<SurvivalDataset>& out) {
  const std::size_t n = ds.size() - begin;
  const std::size_t base = n / clients;
  const std::size_t extra = n % clients;
  std::size_t pos = begin;
  for (int k = 0; k < clients; ++k) {
    const std::size_t len =
        base + (static_cast<std::size_t>(k) < extra ? 1 : 0);
    out.emplace_back(ds.begin() + pos, ds.begin() + pos + len);
    pos += len;
  }
}

double checked_total(std::span<const double> weights, std::size_t expected) {
  if (weights.size() != expected || expected == 0) {
    throw std::invalid_argument("averaging: need one weight per input");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0))
      throw std::invalid_argument("averaging: weights must be > 0");
    total += w;
  }
  return total;
}

template <typename T>
const T& expect(const ClientMessage& msg) {
  const auto* p = std::get_if<Private<T>>(&msg.payload);
  if (p == nullptr) {
    throw std::invalid_argument("aggregate: message does not match the path");
  }
  return p->value();
}

Partition draw_partition(const SurvivalDataset& data, const CollabConfig& cfg,
                         std::uint64_t seed) {
  NoiseSource rng(seed);
  return cfg.split.minority_fraction
             ? split_uneven(data, cfg.clients, *cfg.split.minority_fraction,
                            rng)
             : split_even(data, cfg.clients, rng);
}

}  // namespace

Mechanism mechanism_of(PathId path) {
  switch (path) {
    case PathId::kA:
    case PathId::kB:
    case PathId::kC:
      return Mechanism::kDpSurv;
    case PathId::kD:
    case PathId::kE:
    case PathId::kF:
      return Mechanism::kDpProb;
    case PathId::kM:
      return Mechanism::kDpMatrix;
  }
  throw std::invalid_argument("unknown path");
}

Sharing sharing_of(PathId path) {
  switch (path) {
    case PathId::kA:
    case PathId::kD:
    case PathId::kM:
      return Sharing::kPooledDataset;
    case PathId::kB:
    case PathId::kE:
      return Sharing::kAveragedKm;
    case PathId::kC:
    case PathId::kF:
      return Sharing::kAveragedProb;
  }
  throw std::invalid_argument("unknown path");
}

std::string_view path_name(PathId path) {
  static constexpr std::array<std::string_view, 7> kNames = {"A", "B", "C", "D",
                                                             "E", "F", "M"};
  return kNames[static_cast<std::size_t>(path)];
}

std::optional<PathId> parse_path(std::string_view name) {
  for (PathId p : kAllPaths) {
    if (path_name(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::kDpSurv:
      return "dp-surv";
    case Mechanism::kDpProb:
      return "dp-prob";
    case Mechanism::kDpMatrix:
      return "dp-matrix";
  }
  return "?";
}

std::optional<Mechanism> parse_mechanism(std::string_view name) {
  for (Mechanism m :
       {Mechanism::kDpSurv, Mechanism::kDpProb, Mechanism::kDpMatrix}) {
    if (mechanism_name(m) == name) return m;
  }
  return std::nullopt;
}

PathId centralized_path(Mechanism m) {
  switch (m) {
    case Mechanism::kDpSurv:
      return PathId::kA;
    case Mechanism::kDpProb:
      return PathId::kD;
    case Mechanism::kDpMatrix:
      return PathId::kM;
  }
  throw std::invalid_argument("unknown mechanism");
}

std::vector<std::int64_t> Partition::sizes() const {
  std::vector<std::int64_t> out;
  out.reserve(shards.size());
  for (const auto& s : shards)
    out.push_back(static_cast<std::int64_t>(s.size()));
  return out;
}

std::int64_t Partition::total() const {
  const auto s = sizes();
  return std::accumulate(s.begin(), s.end(), std::int64_t{0});
}

Partition split_even(const SurvivalDataset& ds, int clients, NoiseSource& rng) {
  if (clients < 1 || static_cast<std::size_t>(clients) > ds.size()) {
    throw std::invalid_argument("split_even: need 1 <= K <= N");
  }
  SurvivalDataset shuffled = ds;
  shuffle(shuffled, rng);
  Partition part;
  append_even_slices(shuffled, 0, clients, part.shards);
  return part;
}

Partition split_uneven(const SurvivalDataset& ds, int clients,
                       double minority_fraction, NoiseSource& rng) {
  if (clients < 2) throw std::invalid_argument("split_uneven: need K >= 2");
  if (!(minority_fraction > 0.0 && minority_fraction < 1.0)) {
    throw std::invalid_argument("split_uneven: fraction must lie in (0, 1)");
  }
  const auto minority = static_cast<std::size_t>(
      std::round(minority_fraction * static_cast<double>(ds.size())));
  if (minority == 0) {
    throw std::invalid_argument("split_uneven: minority shard is empty");
  }
  if (ds.size() < minority + static_cast<std::size_t>(clients - 1)) {
    throw std::invalid_argument("split_uneven: too few records for K clients");
  }
  SurvivalDataset shuffled = ds;
  shuffle(shuffled, rng);
  Partition part;
  part.shards.emplace_back(shuffled.begin(), shuffled.begin() + minority);
  append_even_slices(shuffled, minority, clients - 1, part.shards);
  return part;
}

KMCurve average_km(std::span<const KMCurve> curves,
                   std::span<const double> weights) {
  const double total = checked_total(weights, curves.size());
  const TimeGrid& grid = curves.front().grid();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.size());
  for (std::size_t k = 0; k < curves.size(); ++k) {
    if (!(curves[k].grid() == grid)) {
      throw std::invalid_argument("average_km: grid mismatch");
    }
    acc += weights[k] * curves[k].values();
  }
  return KMCurve(grid, isotonic_project(acc / total));
}

ProbMass average_prob(std::span<const ProbMass> probs,
                      std::span<const double> weights) {
  const double total = checked_total(weights, probs.size());
  const TimeGrid& grid = probs.front().grid();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.size() + 1);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!(probs[k].grid() == grid)) {
      throw std::invalid_argument("average_prob: grid mismatch");
    }
    acc += weights[k] * probs[k].values();
  }
  return ProbMass(grid, acc / total);
}

SurvivalDataset pool_datasets(std::span<const SurvivalDataset> datasets) {
  SurvivalDataset out;
  for (const auto& ds : datasets) out.insert(out.end(), ds.begin(), ds.end());
  return out;
}

Client::Client(SurvivalDataset shard) : shard_(std::move(shard)) {
  if (shard_.empty()) throw std::invalid_argument("client: empty shard");
}

ClientMessage Client::release(PathId path, const CollabConfig& cfg,
                              NoiseSource& rng) const {
  const CountMatrix counts =
      count_events(discretize(shard_, cfg.grid), cfg.grid);
  const std::int64_t n = size();
  const SurrogateConfig local{cfg.client_surrogate_n.value_or(n)};

  ClientMessage msg{n, Private<SurvivalDataset>(SurvivalDataset{})};
  switch (mechanism_of(path)) {
    case Mechanism::kDpSurv: {
      const DpSurvConfig dp{cfg.epsilon, cfg.k_fraction, n,
                            cfg.sensitivity_mode, cfg.acknowledge_non_dp};
      const Private<KMCurve> s(dp_surv(km_estimate(counts), dp, rng));
      if (path == PathId::kA) {
        msg.payload = s.then([&](const KMCurve& c) {
          return generate_surrogate(km_to_prob(c), local);
        });
      } else if (path == PathId::kB) {
        msg.payload = s;
      } else {
        msg.payload = s.then(km_to_prob);
      }
      break;
    }
    case Mechanism::kDpProb: {
      const DpProbConfig dp{cfg.epsilon, n, cfg.sensitivity_mode, cfg.prob_rule,
                            cfg.acknowledge_non_dp};
      DpProbRelease released =
          dp_prob(km_to_prob(km_estimate(counts)), dp, rng);
      msg.degenerate = released.degenerate;
      const Private<ProbMass> y(std::move(released.mass));
      if (path == PathId::kD) {
        msg.payload = y.then(
            [&](const ProbMass& p) { return generate_surrogate(p, local); });
      } else if (path == PathId::kE) {
        msg.payload = y.then(prob_to_km);
      } else {
        msg.payload = y;
      }
      break;
    }
    case Mechanism::kDpMatrix: {
      const Private<CountMatrix> m(dp_matrix(counts, cfg.epsilon, rng));
      msg.payload = m.then(counts_to_dataset);
      break;
    }
  }
  return msg;
}

SurvivalDataset aggregate(PathId path, std::span<const ClientMessage> messages,
                          const CollabConfig& cfg) {
  if (messages.empty()) throw std::invalid_argument("aggregate: no clients");
  std::vector<double> weights;
  std::int64_t total = 0;
  for (const auto& m : messages) {
    weights.push_back(static_cast<double>(m.size));
    total += m.size;
  }
  const SurrogateConfig global{cfg.global_surrogate_n.value_or(total)};

  switch (sharing_of(path)) {
    case Sharing::kPooledDataset: {
      std::vector<SurvivalDataset> parts;
      for (const auto& m : messages)
        parts.push_back(expect<SurvivalDataset>(m));
      return pool_datasets(parts);
    }
    case Sharing::kAveragedKm: {
      std::vector<KMCurve> curves;
      for (const auto& m : messages) curves.push_back(expect<KMCurve>(m));
      return generate_surrogate(km_to_prob(average_km(curves, weights)),
                                global);
    }
    case Sharing::kAveragedProb: {
      std::vector<ProbMass> probs;
      for (const auto& m : messages) probs.push_back(expect<ProbMass>(m));
      return generate_surrogate(average_prob(probs, weights), global);
    }
  }
  throw std::invalid_argument("aggregate: unknown path");
}

RunResult run_path(PathId path, const Partition& part, const CollabConfig& cfg,
                   const SurvivalDataset& reference, std::uint64_t run_seed) {
  std::vector<ClientMessage> messages;
  messages.reserve(part.shards.size());
  int degenerate = 0;
  for (std::size_t c = 0; c < part.shards.size(); ++c) {
    NoiseSource rng(derive_seed(run_seed, c));
    messages.push_back(Client(part.shards[c]).release(path, cfg, rng));
    degenerate += messages.back().degenerate ? 1 : 0;
  }
  SurvivalDataset surrogate = aggregate(path, messages, cfg);
  KMCurve curve = km_estimate(count_events(surrogate, cfg.grid));
  MetricReport report = evaluate(surrogate, cfg.grid, &reference, cfg.alpha);
  return {std::move(curve), std::move(surrogate), report, degenerate};
}

Partition shared_partition(const SurvivalDataset& data,
                           const CollabConfig& cfg) {
  return draw_partition(data, cfg, derive_seed(cfg.master_seed, kSplitStream));
}

ExperimentResult monte_carlo(PathId path, const SurvivalDataset& data,
                             const SurvivalDataset& reference,
                             const CollabConfig& cfg,
                             std::span<const int> execution_order) {
  if (cfg.runs < 1)
    throw std::invalid_argument("monte_carlo: runs must be >= 1");
  const Partition shared =
      draw_partition(data, cfg, derive_seed(cfg.master_seed, kSplitStream));

  std::vector<int> order(execution_order.begin(), execution_order.end());
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(cfg.runs));
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted.size() != static_cast<std::size_t>(cfg.runs) ||
        sorted[i] != static_cast<int>(i)) {
      throw std::invalid_argument(
          "monte_carlo: execution order must be a permutation of the runs");
    }
  }

  struct Outcome {
    MetricReport report;
    int degenerate = 0;
  };
  std::vector<Outcome> outcomes(order.size());
  auto run_one = [&](int r) {
    const std::uint64_t run_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
    const Partition part =
        cfg.resplit_per_run
            ? draw_partition(data, cfg, derive_seed(run_seed, kSplitStream))
            : shared;
    RunResult res = run_path(path, part, cfg, reference, run_seed);
    outcomes[static_cast<std::size_t>(r)] = {res.report,
                                             res.degenerate_releases};
  };
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < order.size();) {
      try {
        run_one(order[i]);
      } catch (...) {
        const std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = order.size();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned threads = std::min<unsigned>(
      cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : hw,
      static_cast<unsigned>(order.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result{path, {}, {}, 0};
  for (const Outcome& o : outcomes) {
    result.reports.push_back(o.report);
    result.degenerate_releases += o.degenerate;
    const std::array<std::optional<double>, kMetricCount> values = {
        o.report.p_value, o.report.median.median, o.report.survival[0].value,
        o.report.survival[1].value, o.report.survival[2].value};
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (values[m]) {
        result.metrics[m].samples.push_back(*values[m]);
      } else {
        ++result.metrics[m].undefined;
      }
    }
  }
  const std::uint64_t boot_seed =
      derive_seed(cfg.master_seed, kBootstrapStream);
  for (std::size_t m = 0; m < result.metrics.size(); ++m) {
    MetricSummary& summary = result.metrics[m];
    if (summary.samples.empty()) continue;
    NoiseSource rng(derive_seed(boot_seed, m));
    summary.ci = bootstrap_mean_ci(summary.samples, cfg.bootstrap_resamples,
                                   cfg.alpha, rng);
  }
  return result;
}

}  // namespace survdp
