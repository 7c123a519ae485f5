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

// Acceptance gate. `acceptance_test <criterion>` prints one PASS/FAIL line per
// check and exits 0 (all pass), 1 (any failure) or 77 (skipped: the dataset
// exports are not in $SURVDP_DATA_DIR). Criterion 6 needs no data.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "oracles.h"
#include "survdp/collab.h"
#include "survdp/io.h"
#include "survdp/isotonic.h"
#include "survdp/mechanisms.h"
#include "survdp/metrics.h"
#include "survdp/noise.h"
#include "survdp/spectral.h"
#include "survdp/surrogate.h"
#include "survdp/survival.h"
#include "test_util.h"

namespace survdp {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kSkip = 77;
constexpr std::uint64_t kSeed = 20240601;

class Report {
 public:
  explicit Report(int criterion) : criterion_(criterion) {}

  // |got - want| <= tol
  void near(const std::string& what, double got, double want, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "got %.6g, want %.6g +- %.3g", got, want,
                  tol);
    check(what, std::abs(got - want) <= tol, buf);
  }

  void within(const std::string& what, double got, double lo, double hi) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "got %.6g, want [%.6g, %.6g]", got, lo, hi);
    check(what, got >= lo && got <= hi, buf);
  }

  void at_most(const std::string& what, double got, double limit) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "got %.6g, want <= %.6g", got, limit);
    check(what, got <= limit, buf);
  }

  void at_least(const std::string& what, double got, double limit) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "got %.6g, want >= %.6g", got, limit);
    check(what, got >= limit, buf);
  }

  void check(const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s  C%d %s: %s\n", ok ? "PASS" : "FAIL", criterion_,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures_ += ok ? 0 : 1;
  }

  void runtime(Clock::time_point start, double limit_s) {
    const double s =
        std::chrono::duration<double>(Clock::now() - start).count();
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.2f s, limit %.0f s", s, limit_s);
    check("runtime", s < limit_s, buf);
  }

  int exit_code() const { return failures_ == 0 ? 0 : 1; }

 private:
  int criterion_;
  int failures_ = 0;
};

double value_or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// Dataset criteria

struct Datasets {
  std::map<std::string, LoadedDataset> by_name;
  const LoadedDataset& operator[](const std::string& name) const {
    return by_name.at(name);
  }
};

std::optional<Datasets> load_datasets(const std::vector<std::string>& names) {
  const char* env = std::getenv("SURVDP_DATA_DIR");
  const fs::path dir = env != nullptr ? env : SURVDP_DEFAULT_FIXTURE_DIR;
  Datasets out;
  for (const std::string& name : names) {
    const fs::path file = dir / (name + ".csv");
    if (!fs::exists(file)) {
      std::printf("SKIP  %s not found (set SURVDP_DATA_DIR)\n",
                  file.string().c_str());
      return std::nullopt;
    }
    out.by_name.emplace(name, ingest(file, true));
  }
  return out;
}

TimeGrid grid_for(const LoadedDataset& d, double b) {
  return TimeGrid(d.file.max_duration, b);
}

// Same resolution as the `experiment` subcommand.
TableRow sweep(const std::string& dataset, const LoadedDataset& data,
               Mechanism method, std::optional<PathId> path, double epsilon,
               std::optional<double> minority = std::nullopt) {
  ExperimentConfig cfg;
  cfg.dataset = dataset;
  cfg.method = method;
  cfg.path = path;
  cfg.epsilons = {epsilon};
  cfg.clients = 10;
  cfg.minority_fraction = minority;
  cfg.runs = 100;
  cfg.seed = kSeed;
  const ResultTable t = run_experiment(resolve_config(cfg, data.file), data);
  return t.rows.at(1);
}

double mean_of(const TableRow& row, MetricId m) {
  return value_or_nan(row.cells[m].value);
}

constexpr std::array<double, 3> kPercentTol = {0.01, 0.01, 0.01};

int criterion1() {
  Report rep(1);
  const auto data = load_datasets({"gbsg", "metabric", "support"});
  if (!data) return kSkip;
  const auto start = Clock::now();
  struct Row {
    std::string name;
    double median;
    std::array<double, 3> s;
  };
  const std::array<Row, 3> rows = {{{"gbsg", 24, {0.58, 0.24, 0.08}},
                                    {"metabric", 86, {0.49, 0.16, 0.02}},
                                    {"support", 57, {0.14, 0.05, 0.01}}}};
  for (const Row& want : rows) {
    const LoadedDataset& d = (*data)[want.name];
    const TimeGrid grid = grid_for(d, 1.0);
    const MetricReport r =
        evaluate(discretize(d.records, grid), grid, &d.records);
    rep.near(want.name + " median", value_or_nan(r.median.median), want.median,
             1.0);
    for (std::size_t i = 0; i < 3; ++i) {
      rep.near(want.name + " " + std::string(kMetricNames[kS25 + i]),
               r.survival[i].value, want.s[i], kPercentTol[i]);
    }
  }
  rep.runtime(start, 10);
  return rep.exit_code();
}

// Surrogate of the discretized KM estimate with n = number of records.
SurvivalDataset surrogate_of(const LoadedDataset& d, double b) {
  const TimeGrid grid = grid_for(d, b);
  const KMCurve s =
      km_estimate(count_events(discretize(d.records, grid), grid));
  return generate_surrogate(
      km_to_prob(s),
      SurrogateConfig{static_cast<std::int64_t>(d.records.size())});
}

int criterion2() {
  Report rep(2);
  const auto data = load_datasets({"gbsg", "metabric", "support"});
  if (!data) return kSkip;
  const auto start = Clock::now();
  const LoadedDataset& gbsg = (*data)["gbsg"];
  const double ref = std::round(*raw_median_survival(gbsg.records));
  for (auto [b, want] : {std::pair{1.0, 0.042}, std::pair{2.0, 0.083}}) {
    const SurvivalDataset sur = surrogate_of(gbsg, b);
    const TimeGrid grid = grid_for(gbsg, b);
    const auto med =
        median_survival(km_estimate(count_events(sur, grid))).median;
    rep.near("gbsg cmd b=" + std::to_string(static_cast<int>(b)),
             cmd(value_or_nan(med), ref), want, 0.005);
  }
  for (auto [name, want] : {std::pair{"gbsg", 0.33}, std::pair{"support", 1.00},
                            std::pair{"metabric", 0.78}}) {
    const LoadedDataset& d = (*data)[name];
    const double p = logrank(surrogate_of(d, 1.0), d.records).p_value;
    rep.near(std::string(name) + " logrank p b=1", p, want, 0.05);
  }
  rep.runtime(start, 30);
  return rep.exit_code();
}

struct Interval {
  double value, lo, hi;
};

struct CentralRow {
  std::string dataset;
  Mechanism method;
  std::array<Interval, kMetricCount> cells;  // p, median, s25, s50, s75
};

int criterion3() {
  Report rep(3);
  const auto data = load_datasets({"gbsg", "metabric", "support"});
  if (!data) return kSkip;
  const auto start = Clock::now();
  using M = Mechanism;
  const std::vector<CentralRow> table = {
      {"gbsg",
       M::kDpSurv,
       {{{0.34, 0.33, 0.35},
         {24, 24, 24},
         {0.58, 0.58, 0.58},
         {0.25, 0.24, 0.25},
         {0.08, 0.08, 0.08}}}},
      {"gbsg",
       M::kDpProb,
       {{{0.21, 0.16, 0.27},
         {25, 25, 25},
         {0.58, 0.57, 0.58},
         {0.26, 0.26, 0.26},
         {0.09, 0.08, 0.09}}}},
      {"gbsg",
       M::kDpMatrix,
       {{{0.30, 0.23, 0.36},
         {25, 24, 25},
         {0.57, 0.57, 0.58},
         {0.24, 0.23, 0.24},
         {0.04, 0.04, 0.05}}}},
      {"metabric",
       M::kDpSurv,
       {{{0.25, 0.20, 0.30},
         {86, 85, 86},
         {0.49, 0.49, 0.49},
         {0.18, 0.17, 0.18},
         {0.02, 0.02, 0.02}}}},
      {"metabric",
       M::kDpProb,
       {{{0.02, 0.00, 0.04},
         {91, 91, 92},
         {0.51, 0.50, 0.51},
         {0.19, 0.19, 0.19},
         {0.05, 0.05, 0.05}}}},
      {"metabric",
       M::kDpMatrix,
       {{{0.16, 0.11, 0.21},
         {87, 86, 88},
         {0.50, 0.50, 0.51},
         {0.13, 0.12, 0.13},
         {0.01, 0.01, 0.02}}}},
      {"support",
       M::kDpSurv,
       {{{0.26, 0.21, 0.32},
         {59, 57, 61},
         {0.14, 0.14, 0.15},
         {0.05, 0.05, 0.05},
         {0.01, 0.01, 0.01}}}},
      {"support",
       M::kDpProb,
       {{{0.00, 0.00, 0.00},
         {66, 66, 67},
         {0.17, 0.17, 0.18},
         {0.08, 0.08, 0.08},
         {0.03, 0.03, 0.03}}}},
      {"support",
       M::kDpMatrix,
       {{{0.11, 0.08, 0.15},
         {60, 60, 60},
         {0.13, 0.12, 0.13},
         {0.01, 0.00, 0.01},
         {0.00, 0.00, 0.00}}}},
  };
  constexpr std::array<double, kMetricCount> kWiden = {0.05, 1.0, 0.01, 0.01,
                                                       0.01};
  std::map<std::pair<std::string, M>, TableRow> rows;
  for (const CentralRow& want : table) {
    const TableRow got = sweep(want.dataset, (*data)[want.dataset], want.method,
                               std::nullopt, 0.5);
    rows.emplace(std::pair{want.dataset, want.method}, got);
    const std::string label =
        want.dataset + " " + std::string(mechanism_name(want.method)) + " ";
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      rep.within(label + std::string(kMetricNames[m]) + " mean",
                 mean_of(got, static_cast<MetricId>(m)),
                 want.cells[m].lo - kWiden[m], want.cells[m].hi + kWiden[m]);
    }
  }
  rep.near("spot gbsg dp-surv median mean",
           mean_of(rows.at({"gbsg", M::kDpSurv}), kMedian), 24, 1.0);
  rep.near("spot metabric dp-surv s50 mean",
           mean_of(rows.at({"metabric", M::kDpSurv}), kS50), 0.18, 0.01);
  rep.near("spot support dp-surv s25 mean",
           mean_of(rows.at({"support", M::kDpSurv}), kS25), 0.14, 0.01);
  rep.near("spot support dp-prob median mean",
           mean_of(rows.at({"support", M::kDpProb}), kMedian), 66, 1.0);
  rep.near("spot gbsg dp-matrix median mean",
           mean_of(rows.at({"gbsg", M::kDpMatrix}), kMedian), 25, 1.0);
  rep.runtime(start, 300);
  return rep.exit_code();
}

constexpr std::array<double, 3> kGbsgCollabS = {0.58, 0.25, 0.09};

int criterion4() {
  Report rep(4);
  const auto data = load_datasets({"gbsg", "support"});
  if (!data) return kSkip;
  const auto start = Clock::now();
  const LoadedDataset& gbsg = (*data)["gbsg"];
  std::array<TableRow, 3> abc;
  const std::array<PathId, 3> paths = {PathId::kA, PathId::kB, PathId::kC};
  for (std::size_t i = 0; i < 3; ++i) {
    abc[i] = sweep("gbsg", gbsg, Mechanism::kDpSurv, paths[i], 1.0);
    const std::string label =
        "gbsg path " + std::string(path_name(paths[i])) + " ";
    rep.at_least(label + "p mean", mean_of(abc[i], kPValue), 0.12);
    rep.near(label + "median mean", mean_of(abc[i], kMedian), 24, 1.0);
    for (std::size_t k = 0; k < 3; ++k) {
      rep.near(label + std::string(kMetricNames[kS25 + k]) + " mean",
               mean_of(abc[i], static_cast<MetricId>(kS25 + k)),
               kGbsgCollabS[k], 0.01);
    }
  }
  auto spread = [&](MetricId m) {
    double lo = mean_of(abc[0], m), hi = lo;
    for (const TableRow& r : abc) {
      lo = std::min(lo, mean_of(r, m));
      hi = std::max(hi, mean_of(r, m));
    }
    return hi - lo;
  };
  rep.at_most("gbsg A/B/C median spread", spread(kMedian), 2.0);
  for (MetricId m : {kS25, kS50, kS75}) {
    rep.at_most("gbsg A/B/C " + std::string(kMetricNames[m]) + " spread",
                spread(m), 0.01 + 1e-9);
  }
  const TableRow d = sweep("gbsg", gbsg, Mechanism::kDpProb, PathId::kD, 1.0);
  rep.at_least("gbsg path D median mean", mean_of(d, kMedian), 29);
  const TableRow m = sweep("support", (*data)["support"], Mechanism::kDpMatrix,
                           PathId::kM, 1.0);
  rep.at_most("support path M s25 mean", mean_of(m, kS25), 0.02);
  rep.runtime(start, 900);
  return rep.exit_code();
}

int criterion5() {
  Report rep(5);
  const auto data = load_datasets({"gbsg"});
  if (!data) return kSkip;
  const auto start = Clock::now();
  for (double minority : {0.05, 0.5}) {
    for (PathId p : {PathId::kA, PathId::kB, PathId::kC}) {
      const TableRow row =
          sweep("gbsg", (*data)["gbsg"], Mechanism::kDpSurv, p, 1.0, minority);
      char label[64];
      std::snprintf(label, sizeof(label), "gbsg minority %.0f%% path %s ",
                    100 * minority, std::string(path_name(p)).c_str());
      rep.near(std::string(label) + "median mean", mean_of(row, kMedian), 24,
               1.0);
      for (std::size_t k = 0; k < 3; ++k) {
        rep.near(
            std::string(label) + std::string(kMetricNames[kS25 + k]) + " mean",
            mean_of(row, static_cast<MetricId>(kS25 + k)), kGbsgCollabS[k],
            0.01);
      }
    }
  }
  rep.runtime(start, 900);
  return rep.exit_code();
}

// ---------------------------------------------------------------------------
// Dataset-free suite

double max_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Eigen::VectorXd random_vector(NoiseSource& rng, Eigen::Index n) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.centered_uniform();
  return x;
}

void check_dct(Report& rep) {
  NoiseSource rng(1);
  double parseval = 0, round_trip = 0, linearity = 0, oracle = 0;
  for (Eigen::Index n : {1, 2, 3, 5, 16, 64, 88, 255, 512}) {
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
      const Eigen::VectorXd x = random_vector(rng, n);
      const Eigen::VectorXd y = random_vector(rng, n);
      const Eigen::VectorXd fx = dct_forward(x);
      parseval =
          std::max(parseval, std::abs(fx.squaredNorm() - x.squaredNorm()));
      round_trip = std::max(round_trip, max_abs(dct_inverse(fx) - x));
      const double a = 2.5, b = -0.75;
      linearity = std::max(linearity,
                           max_abs(dct_forward(Eigen::VectorXd(a * x + b * y)) -
                                   (a * fx + b * dct_forward(y))));
      if (n <= 255)
        oracle = std::max(oracle, max_abs(fx - testing::reference_dct(x)));
    }
  }
  rep.at_most("dct parseval", parseval, 1e-12);
  rep.at_most("dct round trip", round_trip, 1e-10);
  rep.at_most("dct linearity", linearity, 1e-10);
  rep.at_most("dct vs long-double reference", oracle, 1e-12);
}

void check_isotonic(Report& rep) {
  double worst = 0;
  long checked = 0;
  for (Eigen::Index n = 1; n <= 6; ++n) {
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (;;) {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = 0.25 * digits[static_cast<std::size_t>(i)];
      }
      const Eigen::VectorXd oracle = testing::brute_force_projection(v);
      worst = std::max(worst, max_abs(isotonic_nonincreasing(v) - oracle));
      worst = std::max(worst, max_abs(isotonic_project(v) -
                                      oracle.cwiseMax(0.0).cwiseMin(1.0)));
      ++checked;
      std::size_t pos = 0;
      while (pos < digits.size() && ++digits[pos] == 7) digits[pos++] = 0;
      if (pos == digits.size()) break;
    }
  }
  rep.check("isotonic lattice vectors checked", checked == 137256,
            std::to_string(checked) + " vectors");
  rep.at_most("isotonic vs brute-force cone projection", worst, 1e-12);
}

void check_km(Report& rep) {
  const KMCurve toy =
      km_estimate(count_events(testing::toy_dataset(), testing::toy_grid()));
  rep.at_most(
      "toy KM values",
      max_abs(toy.values() - testing::vec({1, 0.8, 0.6, 0.6, 0.3, 0.3})),
      1e-15);
  NoiseSource rng(2);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index t =
        2 + static_cast<Eigen::Index>(rng.uniform_index(200));
    const KMCurve s(TimeGrid(static_cast<double>(t - 1), 1),
                    testing::random_curve(rng, t));
    worst = std::max(worst,
                     max_abs(prob_to_km(km_to_prob(s)).values() - s.values()));
  }
  rep.at_most("KM to prob round trip", worst, 1e-12);
}

void check_validity(Report& rep) {
  NoiseSource data_rng(3);
  const TimeGrid grid(40, 1);
  const SurvivalDataset ds =
      discretize(testing::random_dataset(data_rng, 300, 40, 0.3), grid);
  const CountMatrix counts = count_events(ds, grid);
  const KMCurve s = km_estimate(counts);
  const ProbMass y = km_to_prob(s);
  const PrivacyBudget eps(0.5);
  const DpSurvConfig surv{eps, 0.1, 300};
  const DpProbConfig prob{eps, 300};
  int bad_surv = 0, bad_prob = 0, bad_matrix = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    NoiseSource rng(derive_seed(kSeed, seed));
    const Eigen::VectorXd c = dp_surv(s, surv, rng).values();
    bool ok = c.minCoeff() >= 0.0 && c.maxCoeff() <= 1.0;
    for (Eigen::Index j = 1; j < c.size(); ++j) ok &= c[j] <= c[j - 1];
    bad_surv += ok ? 0 : 1;

    const Eigen::VectorXd p = dp_prob(y, prob, rng).mass.values();
    bad_prob +=
        (p.minCoeff() >= 0.0 && std::abs(p.sum() - 1.0) <= 1e-12) ? 0 : 1;

    const CountMatrix m = dp_matrix(counts, eps, rng);
    const Eigen::VectorXd r = m.risk_sets();
    bool mok = r.minCoeff() >= 0.0 && m.events().minCoeff() >= 0.0 &&
               m.censored().minCoeff() >= 0.0 &&
               m.events().sum() + m.censored().sum() == 300.0;
    bad_matrix += mok ? 0 : 1;
  }
  rep.check("dp_surv nonincreasing in [0,1] over 1000 seeds", bad_surv == 0,
            std::to_string(bad_surv) + " invalid");
  rep.check("dp_prob valid ProbMass over 1000 seeds", bad_prob == 0,
            std::to_string(bad_prob) + " invalid");
  rep.check("dp_matrix risk sets >= 0 over 1000 seeds", bad_matrix == 0,
            std::to_string(bad_matrix) + " invalid");
}

void check_degeneracy(Report& rep) {
  const SurvivalDataset toy = testing::toy_dataset();
  const TimeGrid grid = testing::toy_grid();
  const CountMatrix counts = count_events(toy, grid);
  const KMCurve s = km_estimate(counts);
  const PrivacyBudget huge(1e12);
  NoiseSource rng(4);
  rep.at_most("eps=1e12 dp_surv on toy (all coefficients kept)",
              max_abs(dp_surv(s, DpSurvConfig{huge, 1.0, 5}, rng).values() -
                      s.values()),
              1e-6);
  rep.at_most(
      "eps=1e12 dp_prob on toy",
      max_abs(dp_prob(km_to_prob(s), DpProbConfig{huge, 5}, rng).mass.values() -
              km_to_prob(s).values()),
      1e-6);
  const CountMatrix m = dp_matrix(counts, huge, rng);
  rep.at_most("eps=1e12 dp_matrix on toy",
              std::max(max_abs(m.events() - counts.events()),
                       max_abs(m.censored() - counts.censored())),
              1e-6);

  // One client; a surrogate of 10 records reproduces the toy mass exactly.
  CollabConfig cfg(grid, huge);
  cfg.k_fraction = 1.0;
  cfg.clients = 1;
  cfg.client_surrogate_n = 10;
  cfg.global_surrogate_n = 10;
  const Partition part = shared_partition(toy, cfg);
  for (PathId p : kAllPaths) {
    const RunResult r = run_path(p, part, cfg, toy, kSeed);
    rep.at_most("eps=1e12 path " + std::string(path_name(p)) + " on toy",
                max_abs(r.global_curve.values() - s.values()), 1e-6);
  }

  // Several clients on uncensored data.
  NoiseSource data_rng(5);
  const TimeGrid g40(40, 1);
  const SurvivalDataset ds = testing::random_dataset(data_rng, 300, 40, 0.0);
  const KMCurve truth = km_estimate(count_events(discretize(ds, g40), g40));
  CollabConfig multi(g40, huge);
  multi.k_fraction = 1.0;
  multi.clients = 3;
  const Partition parts = shared_partition(ds, multi);
  for (PathId p : kAllPaths) {
    const RunResult r = run_path(p, parts, multi, ds, kSeed);
    rep.at_most(
        "eps=1e12 path " + std::string(path_name(p)) + " with 3 clients",
        max_abs(r.global_curve.values() - truth.values()), 1e-6);
  }
}

void check_laplace(Report& rep) {
  const double l = 1.7;
  NoiseSource rng(6);
  constexpr int kN = 1000000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = laplace_sample(rng, l);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kN;
  const double var = sum_sq / kN - mean * mean;
  rep.near("laplace variance / 2l^2", var / (2 * l * l), 1.0, 0.02);
  NoiseSource a(7), b(7);
  bool same = true;
  for (int i = 0; i < 1000; ++i)
    same &= laplace_sample(a, l) == laplace_sample(b, l);
  rep.check("laplace determinism under a fixed seed", same,
            "1000 draws compared");
}

void check_logrank(Report& rep) {
  NoiseSource rng(8);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const SurvivalDataset a = testing::random_dataset(
        rng, 10 + 7 * static_cast<std::size_t>(i), 50, 0.3);
    worst = std::max(worst, std::abs(logrank(a, a).p_value - 1.0));
  }
  rep.at_most("logrank(a,a) p=1 over 50 datasets", worst, 1e-12);
  // t=1: 2 + 2 at risk, one death each; t=2: 1 + 1 at risk, one death in a.
  const LogrankResult r =
      logrank({{1, true}, {2, true}}, {{1, true}, {3, true}});
  const double z = 0.5 / std::sqrt(1.0 / 3 + 1.0 / 4);
  rep.at_most(
      "logrank hand-computed instance",
      std::max(std::abs(r.z - z),
               std::abs(r.p_value - std::erfc(z / std::numbers::sqrt2))),
      1e-10);
}

void check_bootstrap(Report& rep) {
  NoiseSource rng(9);
  const std::vector<double> constant(40, 0.37);
  const BootstrapCI c = bootstrap_mean_ci(constant, 10000, 0.05, rng);
  rep.at_most("bootstrap of constant samples is degenerate",
              std::max(std::abs(c.lower - 0.37), std::abs(c.upper - 0.37)),
              1e-12);
  std::vector<double> coin(1000, 0.0);
  std::fill(coin.begin(), coin.begin() + 500, 1.0);
  const BootstrapCI w = bootstrap_mean_ci(coin, 10000, 0.05, rng);
  const double normal_width = 2 * 1.96 * 0.5 / std::sqrt(1000.0);
  rep.near("bootstrap width of {0,1}x500 / normal width",
           (w.upper - w.lower) / normal_width, 1.0, 0.2);
  rep.check("bootstrap CI brackets 0.5", w.lower < 0.5 && w.upper > 0.5, "");
  int narrower = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> small(100), large(400);
    for (double& x : small) x = rng.centered_uniform();
    for (double& x : large) x = rng.centered_uniform();
    const BootstrapCI s = bootstrap_mean_ci(small, 2000, 0.05, rng);
    const BootstrapCI l = bootstrap_mean_ci(large, 2000, 0.05, rng);
    narrower += (l.upper - l.lower) < (s.upper - s.lower) ? 1 : 0;
  }
  rep.check("bootstrap CI narrows from 100 to 400 samples", narrower == 20,
            std::to_string(narrower) + "/20 repetitions");
}

int criterion6() {
  Report rep(6);
  const auto start = Clock::now();
  check_dct(rep);
  check_isotonic(rep);
  check_km(rep);
  check_validity(rep);
  check_degeneracy(rep);
  check_laplace(rep);
  check_logrank(rep);
  check_bootstrap(rep);
  rep.runtime(start, 60);
  return rep.exit_code();
}

}  // namespace
}  // namespace survdp

int main(int argc, char** argv) {
  const std::array<std::function<int()>, 6> criteria = {
      survdp::criterion1, survdp::criterion2, survdp::criterion3,
      survdp::criterion4, survdp::criterion5, survdp::criterion6};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) which = {1, 2, 3, 4, 5, 6};
  int worst = 0;
  bool all_skipped = true;
  for (int c : which) {
    if (c < 1 || c > 6) {
      std::fprintf(stderr, "usage: acceptance_test [1-6 ...]\n");
      return 2;
    }
    int code;
    try {
      code = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      std::printf("FAIL  C%d aborted: %s\n", c, e.what());
      code = 1;
    }
    if (code == survdp::kSkip) continue;
    all_skipped = false;
    worst = std::max(worst, code);
  }
  return all_skipped ? survdp::kSkip : worst;
}
