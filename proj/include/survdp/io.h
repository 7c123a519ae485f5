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

// Dataset CSV ingestion, experiment configuration, result tables and plot
// data.

#ifndef SURVDP_IO_H_
#define SURVDP_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "survdp/collab.h"
#include "survdp/mechanisms.h"
#include "survdp/metrics.h"
#include "survdp/survival.h"

namespace survdp {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::int64_t line,
             const std::string& what);
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

struct DatasetSummary {
  std::int64_t records = 0;
  std::int64_t censored = 0;
  double max_duration = 0.0;
};

struct LoadedDataset {
  SurvivalDataset records;  // after the optional uncensored filter
  DatasetSummary file;      // as read, before filtering
};

// Reads "duration,event" rows. A first row that is not numeric is a header;
// its columns are located by name (duration/time/t, event/status/e, any
// case), otherwise the first two columns are used. Blank lines are skipped.
// Throws ParseError on missing or negative durations, events outside {0, 1}
// and when nothing is left after filtering.
LoadedDataset parse_dataset(std::istream& in, bool uncensored_only,
                            const std::string& source = "<input>");
LoadedDataset ingest(const std::filesystem::path& file, bool uncensored_only);

void write_dataset(const SurvivalDataset& ds, std::ostream& out);
void write_dataset(const SurvivalDataset& ds,
                   const std::filesystem::path& file);

// Step vertices (t_j, S_j), (t_{j+1}, S_j), the last step ending at t_{T-1}.
// Columns time,survival and, with a band, lower,upper.
void emit_plotdata(const KMCurve& curve, const ConfidenceBand* band,
                   std::ostream& out);
void emit_plotdata(const KMCurve& curve, const ConfidenceBand* band,
                   const std::filesystem::path& file);

// {"bin_size": b, "t_max": t, "values": [...]}
std::string prob_mass_to_json(const ProbMass& y);
ProbMass prob_mass_from_json(std::string_view text);

enum class ReferenceKind { kRaw, kDiscretized };

struct ExperimentConfig {
  std::string dataset;  // gbsg, metabric, support or any other label
  std::string input;    // CSV; load_config resolves it against the file
  bool uncensored_only = true;
  std::optional<double> bin_size;  // default from the dataset table
  std::optional<double> t_max;     // default: largest duration in the file
  double k_fraction = 0.1;
  std::vector<double> epsilons;
  Mechanism method = Mechanism::kDpSurv;
  std::optional<PathId> path;  // empty: centralized
  int clients = 10;
  std::optional<double> minority_fraction;
  int runs = 100;
  std::uint64_t seed = 0;
  std::string output_dir;
  int bootstrap_resamples = 10000;
  double alpha = 0.05;
  bool resplit_per_run = false;
  ProbSensitivityRule prob_rule = ProbSensitivityRule::kTwoOverN;
  SensitivityMode sensitivity_mode = SensitivityMode::kNoCensoring;
  bool acknowledge_non_dp = false;
  std::optional<std::int64_t> surrogate_n;
  ReferenceKind reference = ReferenceKind::kRaw;
  int threads = 0;
};

// Default bin size per (dataset, method); empty for unknown datasets.
std::optional<double> default_bin_size(std::string_view dataset,
                                       Mechanism method);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses a JSON object. Unknown keys, wrong types and a path that does not
// belong to the method are ConfigErrors. A "config" member, as found in a
// result mirror, is unwrapped first.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& file);

// Every field, defaults included.
std::string config_to_json(const ExperimentConfig& cfg);

// Fills bin_size and t_max; throws ConfigError when the bin size has no
// default for the dataset.
ExperimentConfig resolve_config(ExperimentConfig cfg,
                                const DatasetSummary& file);

PathId effective_path(const ExperimentConfig& cfg);
int effective_clients(const ExperimentConfig& cfg);

struct MetricCell {
  std::optional<double> value;
  std::optional<double> lower;
  std::optional<double> upper;
  int undefined = 0;
};

struct TableRow {
  std::string method;             // "non-dp" or a mechanism name
  std::optional<double> epsilon;  // empty for the non-private row
  std::string path;               // A..F, M, or empty
  int clients = 1;
  int runs = 0;
  std::array<MetricCell, kMetricCount> cells;  // p, median, s25, s50, s75
  int degenerate_releases = 0;
};

struct ResultTable {
  std::string config_json;  // resolved
  std::string dataset;
  DatasetSummary file;
  std::int64_t records = 0;
  std::vector<TableRow> rows;
};

// Single-run row: point values, band limits where they exist.
TableRow report_row(const MetricReport& report);

// Non-private row of a dataset on a grid: p-value against `reference`,
// median and survival with the Greenwood log-log band.
TableRow baseline_row(const SurvivalDataset& records, const TimeGrid& grid,
                      const SurvivalDataset& reference, double alpha);

TableRow summarize(const ExperimentResult& result, Mechanism method,
                   double epsilon, int clients, int runs);

// Runs the non-private baseline and one Monte-Carlo sweep per epsilon.
// `cfg` must be resolved.
ResultTable run_experiment(const ExperimentConfig& cfg,
                           const LoadedDataset& data);

void write_table_csv(const ResultTable& table, std::ostream& out);
std::string table_to_json(const ResultTable& table);
ResultTable table_from_json(std::string_view text);

}  // namespace survdp

#endif  // SURVDP_IO_H_
