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

#include "survdp/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "survdp/collab.h"
#include "survdp/io.h"
#include "survdp/mechanisms.h"
#include "survdp/metrics.h"
#include "survdp/surrogate.h"
#include "survdp/survival.h"

namespace survdp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Usage problems found after CLI11 accepted the flags.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridFlags {
  double b = 1.0;
  std::optional<double> t_max;
  bool all_records = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--b", b, "Bin size")->check(CLI::PositiveNumber);
    cmd->add_option("--t-max", t_max, "Study end (default: largest duration)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--all-records", all_records,
                  "Keep censored records (default: uncensored only)");
  }

  TimeGrid grid(const DatasetSummary& file) const {
    const double end = t_max.value_or(file.max_duration);
    if (!(end > 0.0)) throw UsageError("largest duration is 0; pass --t-max");
    return TimeGrid(end, b);
  }
};

fs::path output_dir(const std::string& flag, const std::string& fallback = "") {
  if (!flag.empty()) return flag;
  if (!fallback.empty()) return fallback;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env) {
    return env;
  }
  return "survdp_out";
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

void log_ingest(std::ostream& err, const fs::path& file,
                const LoadedDataset& d) {
  err << file.string() << ": " << d.file.records << " records, "
      << d.file.censored << " censored, " << d.records.size() << " kept\n";
}

// Writes <stem>.csv and <stem>.json and echoes the CSV.
void emit_table(const ResultTable& table, const fs::path& dir,
                const std::string& stem, std::ostream& out) {
  std::ostringstream csv;
  write_table_csv(table, csv);
  write_text(dir / (stem + ".csv"), csv.str());
  write_text(dir / (stem + ".json"), table_to_json(table));
  out << csv.str();
}

ResultTable single_row_table(const std::string& dataset, const json& settings,
                             const LoadedDataset& data, TableRow row) {
  ResultTable table;
  table.config_json = settings.dump(2);
  table.dataset = dataset;
  table.file = data.file;
  table.records = static_cast<std::int64_t>(data.records.size());
  table.rows.push_back(std::move(row));
  return table;
}

SensitivityMode parse_mode(const std::string& s) {
  if (s == "no-censoring") return SensitivityMode::kNoCensoring;
  if (s == "worst-case") return SensitivityMode::kWorstCaseCensoring;
  throw UsageError("unknown sensitivity mode '" + s + "'");
}

ProbSensitivityRule parse_rule(const std::string& s) {
  if (s == "two-over-n") return ProbSensitivityRule::kTwoOverN;
  if (s == "sqrt-two-over-n") return ProbSensitivityRule::kSqrtTwoOverN;
  throw UsageError("unknown prob sensitivity rule '" + s + "'");
}

std::string dataset_label(const std::string& name, const fs::path& input) {
  return name.empty() ? input.stem().string() : name;
}

void curve_files(const KMCurve& s, const fs::path& dir,
                 const std::string& stem) {
  emit_plotdata(s, nullptr, dir / (stem + ".csv"));
  write_text(dir / (stem + "_prob.json"), prob_mass_to_json(km_to_prob(s)));
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Differentially private Kaplan-Meier estimation", "survdp"};
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("--output-dir", out_flag,
                 std::string("Output directory (default: $") + kOutputDirEnv +
                     " or survdp_out)");

  // km
  CLI::App* km = app.add_subcommand("km", "Non-private KM curve and metrics");
  std::string km_input, km_name;
  double alpha = 0.05;
  GridFlags km_grid;
  km->add_option("--input", km_input, "Dataset CSV")->required();
  km->add_option("--name", km_name, "Dataset label for the table");
  km->add_option("--alpha", alpha, "CI level")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  km_grid.add_to(km);

  // dp
  CLI::App* dp = app.add_subcommand("dp", "One release of one mechanism");
  std::string dp_method, dp_input, dp_prob_file, dp_mode = "no-censoring",
                                                 dp_rule = "two-over-n";
  double dp_eps = 0.0, dp_k = 0.1;
  std::optional<std::int64_t> dp_n;
  std::uint64_t dp_seed = 0;
  bool dp_ack = false;
  GridFlags dp_grid;
  dp->add_option("--method", dp_method, "dp-surv, dp-prob or dp-matrix")
      ->required()
      ->check(CLI::IsMember({"dp-surv", "dp-prob", "dp-matrix"}));
  auto* dp_in = dp->add_option("--input", dp_input, "Dataset CSV");
  auto* dp_pin = dp->add_option("--prob", dp_prob_file,
                                "Probability vector JSON instead of a CSV");
  dp_in->excludes(dp_pin);
  dp->add_option("--n", dp_n, "Public dataset size (required with --prob)")
      ->check(CLI::PositiveNumber);
  dp->add_option("--epsilon", dp_eps, "Privacy budget")
      ->required()
      ->check(CLI::PositiveNumber);
  dp->add_option("--k-fraction", dp_k, "Share of DCT coefficients kept")
      ->check(CLI::Range(1e-12, 1.0));
  dp->add_option("--seed", dp_seed, "Noise seed");
  dp->add_option("--sensitivity-mode", dp_mode, "no-censoring or worst-case");
  dp->add_option("--prob-sensitivity", dp_rule,
                 "two-over-n or sqrt-two-over-n");
  dp->add_flag("--acknowledge-non-dp", dp_ack,
               "Allow the worst-case mode, which is not a DP guarantee");
  dp_grid.add_to(dp);

  // surrogate
  CLI::App* sur =
      app.add_subcommand("surrogate", "Dataset from a probability vector");
  std::string sur_prob;
  std::int64_t sur_n = 0;
  sur->add_option("--prob", sur_prob, "Probability vector JSON")->required();
  sur->add_option("--n", sur_n, "Surrogate population size")
      ->required()
      ->check(CLI::PositiveNumber);

  // collab
  CLI::App* col =
      app.add_subcommand("collab", "One run of one collaboration path");
  std::string col_input, col_path, col_name, col_reference = "raw";
  double col_eps = 0.0, col_k = 0.1;
  int col_clients = 10, col_run = 0;
  std::optional<double> col_minority;
  std::optional<std::int64_t> col_surrogate_n;
  std::uint64_t col_seed = 0;
  GridFlags col_grid;
  col->add_option("--input", col_input, "Dataset CSV")->required();
  col->add_option("--name", col_name, "Dataset label for the table");
  col->add_option("--path", col_path, "A-F or M")
      ->required()
      ->check(CLI::IsMember({"A", "B", "C", "D", "E", "F", "M"}));
  col->add_option("--epsilon", col_eps, "Privacy budget")
      ->required()
      ->check(CLI::PositiveNumber);
  col->add_option("--clients", col_clients, "Number of clients")
      ->check(CLI::PositiveNumber);
  col->add_option("--minority", col_minority, "Share of the minority client")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  col->add_option("--k-fraction", col_k, "Share of DCT coefficients kept")
      ->check(CLI::Range(1e-12, 1.0));
  col->add_option("--surrogate-n", col_surrogate_n, "Global surrogate size")
      ->check(CLI::PositiveNumber);
  col->add_option("--reference", col_reference, "raw or discretized")
      ->check(CLI::IsMember({"raw", "discretized"}));
  col->add_option("--seed", col_seed, "Master seed");
  col->add_option("--run", col_run, "Run index within the experiment")
      ->check(CLI::NonNegativeNumber);
  col_grid.add_to(col);

  // experiment
  CLI::App* exp =
      app.add_subcommand("experiment", "Monte-Carlo sweep from a config");
  std::string exp_config;
  std::optional<int> exp_threads;
  exp->add_option("--config", exp_config, "Experiment JSON")->required();
  exp->add_option("--threads", exp_threads, "Worker threads")
      ->check(CLI::NonNegativeNumber);

  // report
  CLI::App* rep =
      app.add_subcommand("report", "Re-render a stored result mirror");
  std::string rep_results, rep_output;
  rep->add_option("--results", rep_results, "Result JSON")->required();
  rep->add_option("--output", rep_output, "Write the CSV here as well");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (km->parsed()) {
      const LoadedDataset data = ingest(km_input, !km_grid.all_records);
      log_ingest(err, km_input, data);
      const TimeGrid grid = km_grid.grid(data.file);
      const SurvivalDataset gridded = discretize(data.records, grid);
      const CountMatrix counts = count_events(gridded, grid);
      const KMCurve s = km_estimate(counts);
      const ConfidenceBand band =
          ci_loglog(s, greenwood_variance(counts, s), alpha);
      TableRow row = report_row(evaluate(gridded, grid, &data.records, alpha));
      row.method = "non-dp";
      const json settings = {
          {"command", "km"},      {"input", km_input},
          {"b", grid.bin_size()}, {"t_max", grid.t_max()},
          {"alpha", alpha},       {"uncensored_only", !km_grid.all_records}};
      const fs::path dir = output_dir(out_flag);
      emit_plotdata(s, &band, dir / "km_curve.csv");
      emit_table(single_row_table(dataset_label(km_name, km_input), settings,
                                  data, std::move(row)),
                 dir, "km_table", out);
      return kExitOk;
    }

    if (dp->parsed()) {
      const Mechanism method = *parse_mechanism(dp_method);
      if (dp_input.empty() == dp_prob_file.empty()) {
        throw UsageError("dp: pass exactly one of --input and --prob");
      }
      if (!dp_prob_file.empty() && !dp_n)
        throw UsageError("dp: --prob needs --n");
      if (!dp_prob_file.empty() && method == Mechanism::kDpMatrix) {
        throw UsageError("dp: dp-matrix needs a dataset (--input)");
      }
      const PrivacyBudget eps(dp_eps);
      const SensitivityMode mode = parse_mode(dp_mode);
      const ProbSensitivityRule rule = parse_rule(dp_rule);
      NoiseSource rng(dp_seed);
      const fs::path dir = output_dir(out_flag);

      std::optional<CountMatrix> counts;
      std::optional<ProbMass> input;
      std::int64_t n = 0;
      if (!dp_input.empty()) {
        const LoadedDataset data = ingest(dp_input, !dp_grid.all_records);
        log_ingest(err, dp_input, data);
        const TimeGrid grid = dp_grid.grid(data.file);
        counts = count_events(discretize(data.records, grid), grid);
        input = km_to_prob(km_estimate(*counts));
        n = dp_n.value_or(static_cast<std::int64_t>(data.records.size()));
      } else {
        input = prob_mass_from_json(read_file(dp_prob_file));
        n = *dp_n;
      }
      write_text(dir / "input_prob.json", prob_mass_to_json(*input));

      switch (method) {
        case Mechanism::kDpSurv: {
          const DpSurvConfig cfg{eps, dp_k, n, mode, dp_ack};
          curve_files(dp_surv(prob_to_km(*input), cfg, rng), dir,
                      "release_curve");
          out << "wrote " << (dir / "release_curve.csv").string() << " and "
              << (dir / "release_curve_prob.json").string() << '\n';
          break;
        }
        case Mechanism::kDpProb: {
          const DpProbConfig cfg{eps, n, mode, rule, dp_ack};
          const DpProbRelease r = dp_prob(*input, cfg, rng);
          write_text(dir / "release_prob.json", prob_mass_to_json(r.mass));
          emit_plotdata(prob_to_km(r.mass), nullptr, dir / "release_curve.csv");
          if (r.degenerate) {
            err << "warning: every entry was clipped; all mass moved beyond "
                   "the study\n";
          }
          out << "wrote " << (dir / "release_prob.json").string() << " and "
              << (dir / "release_curve.csv").string() << '\n';
          break;
        }
        case Mechanism::kDpMatrix: {
          const CountMatrix noisy = dp_matrix(*counts, eps, rng);
          write_dataset(counts_to_dataset(noisy), dir / "release_dataset.csv");
          curve_files(km_estimate(noisy), dir, "release_curve");
          out << "wrote " << (dir / "release_dataset.csv").string() << " and "
              << (dir / "release_curve.csv").string() << '\n';
          break;
        }
      }
      return kExitOk;
    }

    if (sur->parsed()) {
      const ProbMass y = prob_mass_from_json(read_file(sur_prob));
      const SurvivalDataset ds = generate_surrogate(y, SurrogateConfig{sur_n});
      const fs::path dir = output_dir(out_flag);
      write_dataset(ds, dir / "surrogate.csv");
      emit_plotdata(km_estimate(count_events(ds, y.grid())), nullptr,
                    dir / "surrogate_curve.csv");
      out << "wrote " << ds.size() << " records to "
          << (dir / "surrogate.csv").string() << '\n';
      return kExitOk;
    }

    if (col->parsed()) {
      const PathId path = *parse_path(col_path);
      const LoadedDataset data = ingest(col_input, !col_grid.all_records);
      log_ingest(err, col_input, data);
      const TimeGrid grid = col_grid.grid(data.file);
      CollabConfig cfg(grid, PrivacyBudget(col_eps));
      cfg.k_fraction = col_k;
      cfg.clients = col_clients;
      cfg.split.minority_fraction = col_minority;
      cfg.global_surrogate_n = col_surrogate_n;
      cfg.master_seed = col_seed;
      const SurvivalDataset reference = col_reference == "raw"
                                            ? data.records
                                            : discretize(data.records, grid);
      const Partition part = shared_partition(data.records, cfg);
      const RunResult res =
          run_path(path, part, cfg, reference,
                   derive_seed(col_seed, static_cast<std::uint64_t>(col_run)));
      TableRow row = report_row(res.report);
      row.method = std::string(mechanism_name(mechanism_of(path)));
      row.epsilon = col_eps;
      row.path = col_path;
      row.clients = col_clients;
      row.degenerate_releases = res.degenerate_releases;
      json settings = {{"command", "collab"},       {"input", col_input},
                       {"path", col_path},          {"epsilon", col_eps},
                       {"clients", col_clients},    {"b", grid.bin_size()},
                       {"t_max", grid.t_max()},     {"k_fraction", col_k},
                       {"seed", col_seed},          {"run", col_run},
                       {"reference", col_reference}};
      settings["minority_fraction"] =
          col_minority ? json(*col_minority) : json(nullptr);
      const fs::path dir = output_dir(out_flag);
      write_dataset(res.global_surrogate, dir / "global_surrogate.csv");
      const CountMatrix counts = count_events(res.global_surrogate, grid);
      const ConfidenceBand band = ci_loglog(
          res.global_curve, greenwood_variance(counts, res.global_curve), 0.05);
      emit_plotdata(res.global_curve, &band, dir / "global_curve.csv");
      emit_table(single_row_table(dataset_label(col_name, col_input), settings,
                                  data, std::move(row)),
                 dir, "collab_table", out);
      return kExitOk;
    }

    if (exp->parsed()) {
      ExperimentConfig cfg = load_config(exp_config);
      if (exp_threads) cfg.threads = *exp_threads;
      if (cfg.input.empty()) throw ConfigError("config needs an input file");
      const LoadedDataset data = ingest(cfg.input, cfg.uncensored_only);
      log_ingest(err, cfg.input, data);
      cfg = resolve_config(std::move(cfg), data.file);
      const ResultTable table = run_experiment(cfg, data);
      emit_table(table, output_dir(out_flag, cfg.output_dir),
                 fs::path(exp_config).stem().string(), out);
      return kExitOk;
    }

    if (rep->parsed()) {
      const ResultTable table = table_from_json(read_file(rep_results));
      std::ostringstream csv;
      write_table_csv(table, csv);
      if (!rep_output.empty()) write_text(rep_output, csv.str());
      out << csv.str();
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace survdp
