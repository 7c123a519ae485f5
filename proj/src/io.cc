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

#include "survdp/io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace survdp {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string table_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& file) {
  if (file.has_parent_path())
    std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + file.string() + " for writing");
  return out;
}

void check_written(std::ostream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

std::string_view rule_name(ProbSensitivityRule r) {
  return r == ProbSensitivityRule::kTwoOverN ? "two-over-n" : "sqrt-two-over-n";
}

std::string_view mode_name(SensitivityMode m) {
  return m == SensitivityMode::kNoCensoring ? "no-censoring" : "worst-case";
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> number_or_empty(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

ParseError::ParseError(const std::string& source, std::int64_t line,
                       const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

LoadedDataset parse_dataset(std::istream& in, bool uncensored_only,
                            const std::string& source) {
  LoadedDataset out;
  std::size_t duration_col = 0;
  std::size_t event_col = 1;
  bool first = true;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      if (!to_double(fields.front())) {
        std::optional<std::size_t> d, e;
        for (std::size_t i = 0; i < fields.size(); ++i) {
          const std::string name = lower(fields[i]);
          if (!d && (name == "duration" || name == "time" || name == "t"))
            d = i;
          if (!e && (name == "event" || name == "status" || name == "e")) e = i;
        }
        if (d.has_value() != e.has_value()) {
          throw ParseError(source, line_no,
                           "header names only one of duration and event");
        }
        if (d) {
          duration_col = *d;
          event_col = *e;
        }
        continue;
      }
    }
    if (fields.size() <= std::max(duration_col, event_col)) {
      throw ParseError(source, line_no, "missing column");
    }
    const auto duration = to_double(fields[duration_col]);
    if (!duration || !std::isfinite(*duration)) {
      throw ParseError(source, line_no, "duration is not a number");
    }
    if (*duration < 0.0) throw ParseError(source, line_no, "negative duration");
    const auto event = to_double(fields[event_col]);
    if (!event || (*event != 0.0 && *event != 1.0)) {
      throw ParseError(source, line_no, "event must be 0 or 1");
    }
    ++out.file.records;
    if (*event == 0.0) ++out.file.censored;
    out.file.max_duration = std::max(out.file.max_duration, *duration);
    if (uncensored_only && *event == 0.0) continue;
    out.records.push_back({*duration, *event == 1.0});
  }
  if (out.records.empty()) {
    throw ParseError(source, line_no, "no records left to analyse");
  }
  return out;
}

LoadedDataset ingest(const std::filesystem::path& file, bool uncensored_only) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return parse_dataset(in, uncensored_only, file.string());
}

void write_dataset(const SurvivalDataset& ds, std::ostream& out) {
  out << "duration,event\n";
  for (const auto& r : ds)
    out << exact(r.time) << ',' << (r.event ? 1 : 0) << '\n';
}

void write_dataset(const SurvivalDataset& ds,
                   const std::filesystem::path& file) {
  std::ofstream out = open_for_write(file);
  write_dataset(ds, out);
  check_written(out, file);
}

void emit_plotdata(const KMCurve& curve, const ConfidenceBand* band,
                   std::ostream& out) {
  const TimeGrid& grid = curve.grid();
  const Index t = curve.size();
  if (band != nullptr && (band->lower.size() != t || band->upper.size() != t)) {
    throw std::invalid_argument("emit_plotdata: band length mismatch");
  }
  out << "time,survival" << (band ? ",lower,upper" : "") << '\n';
  for (Index j = 0; j < t; ++j) {
    for (Index at : {j, std::min(j + 1, t - 1)}) {
      out << exact(grid.point(at)) << ',' << exact(curve[j]);
      if (band)
        out << ',' << exact(band->lower[j]) << ',' << exact(band->upper[j]);
      out << '\n';
    }
  }
}

void emit_plotdata(const KMCurve& curve, const ConfidenceBand* band,
                   const std::filesystem::path& file) {
  std::ofstream out = open_for_write(file);
  emit_plotdata(curve, band, out);
  check_written(out, file);
}

std::string prob_mass_to_json(const ProbMass& y) {
  json j;
  j["bin_size"] = y.grid().bin_size();
  j["t_max"] = y.grid().t_max();
  j["values"] = std::vector<double>(y.values().begin(), y.values().end());
  return j.dump(2) + "\n";
}

ProbMass prob_mass_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    const auto values = j.at("values").get<std::vector<double>>();
    TimeGrid grid(j.at("t_max").get<double>(), j.at("bin_size").get<double>());
    if (static_cast<Index>(values.size()) != grid.size() + 1) {
      throw std::invalid_argument("probability vector needs T + 1 entries");
    }
    return ProbMass(grid,
                    Eigen::Map<const Eigen::VectorXd>(
                        values.data(), static_cast<Index>(values.size())));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad probability vector: ") +
                                e.what());
  }
}

std::optional<double> default_bin_size(std::string_view dataset,
                                       Mechanism method) {
  struct Entry {
    std::string_view name;
    std::array<double, 3> b;  // dp-surv, dp-prob, dp-matrix
  };
  static constexpr std::array<Entry, 3> kTable = {{
      {"gbsg", {1, 2, 2}},
      {"metabric", {6, 4, 6}},
      {"support", {2, 6, 6}},
  }};
  const std::string name = lower(dataset);
  for (const Entry& e : kTable) {
    if (e.name == name) return e.b[static_cast<std::size_t>(method)];
  }
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config") && j["config"].is_object()) {
    j = json(j["config"]);
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig cfg;
  std::optional<std::string> path_text;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "dataset") {
        cfg.dataset = v.get<std::string>();
      } else if (key == "input") {
        cfg.input = v.get<std::string>();
      } else if (key == "uncensored_only") {
        cfg.uncensored_only = v.get<bool>();
      } else if (key == "b") {
        cfg.bin_size = number_or_empty(v);
      } else if (key == "t_max") {
        cfg.t_max = number_or_empty(v);
      } else if (key == "k_fraction") {
        cfg.k_fraction = v.get<double>();
      } else if (key == "epsilons") {
        cfg.epsilons = v.get<std::vector<double>>();
      } else if (key == "method") {
        const auto m = parse_mechanism(v.get<std::string>());
        if (!m)
          throw ConfigError("unknown method '" + v.get<std::string>() + "'");
        cfg.method = *m;
      } else if (key == "path") {
        path_text = v.get<std::string>();
      } else if (key == "clients") {
        cfg.clients = v.get<int>();
      } else if (key == "split") {
        if (v.is_null()) {
          cfg.minority_fraction.reset();
        } else {
          for (const auto& [sk, sv] : v.items()) {
            if (sk != "minority_fraction") {
              throw ConfigError("unknown key 'split." + sk + "'");
            }
            cfg.minority_fraction = number_or_empty(sv);
          }
        }
      } else if (key == "runs") {
        cfg.runs = v.get<int>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "output_dir") {
        cfg.output_dir = v.get<std::string>();
      } else if (key == "bootstrap_resamples") {
        cfg.bootstrap_resamples = v.get<int>();
      } else if (key == "alpha") {
        cfg.alpha = v.get<double>();
      } else if (key == "resplit_per_run") {
        cfg.resplit_per_run = v.get<bool>();
      } else if (key == "prob_sensitivity") {
        const auto s = v.get<std::string>();
        if (s == "two-over-n") {
          cfg.prob_rule = ProbSensitivityRule::kTwoOverN;
        } else if (s == "sqrt-two-over-n") {
          cfg.prob_rule = ProbSensitivityRule::kSqrtTwoOverN;
        } else {
          throw ConfigError("unknown prob_sensitivity '" + s + "'");
        }
      } else if (key == "sensitivity_mode") {
        const auto s = v.get<std::string>();
        if (s == "no-censoring") {
          cfg.sensitivity_mode = SensitivityMode::kNoCensoring;
        } else if (s == "worst-case") {
          cfg.sensitivity_mode = SensitivityMode::kWorstCaseCensoring;
        } else {
          throw ConfigError("unknown sensitivity_mode '" + s + "'");
        }
      } else if (key == "acknowledge_non_dp") {
        cfg.acknowledge_non_dp = v.get<bool>();
      } else if (key == "surrogate_n") {
        if (v.is_null()) {
          cfg.surrogate_n.reset();
        } else {
          cfg.surrogate_n = v.get<std::int64_t>();
        }
      } else if (key == "reference") {
        const auto s = v.get<std::string>();
        if (s == "raw") {
          cfg.reference = ReferenceKind::kRaw;
        } else if (s == "discretized") {
          cfg.reference = ReferenceKind::kDiscretized;
        } else {
          throw ConfigError("unknown reference '" + s + "'");
        }
      } else if (key == "threads") {
        cfg.threads = v.get<int>();
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ConfigError("bad value for '" + key + "': " + e.what());
    }
  }

  if (path_text && *path_text != "centralized") {
    cfg.path = parse_path(*path_text);
    if (!cfg.path) throw ConfigError("unknown path '" + *path_text + "'");
    if (mechanism_of(*cfg.path) != cfg.method) {
      throw ConfigError("path " + *path_text + " does not use method " +
                        std::string(mechanism_name(cfg.method)));
    }
  }
  if (cfg.epsilons.empty()) throw ConfigError("epsilons must be nonempty");
  for (double e : cfg.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw ConfigError("epsilons must be positive and finite");
    }
  }
  if (cfg.clients < 1) throw ConfigError("clients must be >= 1");
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
  if (cfg.bootstrap_resamples < 1) {
    throw ConfigError("bootstrap_resamples must be >= 1");
  }
  if (!(cfg.k_fraction > 0.0 && cfg.k_fraction <= 1.0)) {
    throw ConfigError("k_fraction must lie in (0, 1]");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  if (cfg.bin_size && !(*cfg.bin_size > 0.0))
    throw ConfigError("b must be > 0");
  if (cfg.t_max && !(*cfg.t_max > 0.0)) throw ConfigError("t_max must be > 0");
  if (cfg.surrogate_n && *cfg.surrogate_n < 1) {
    throw ConfigError("surrogate_n must be >= 1");
  }
  if (cfg.minority_fraction) {
    if (!(*cfg.minority_fraction > 0.0 && *cfg.minority_fraction < 1.0)) {
      throw ConfigError("split.minority_fraction must lie in (0, 1)");
    }
    if (!cfg.path)
      throw ConfigError("an uneven split needs a collaboration path");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg = parse_config(text.str());
  std::filesystem::path input(cfg.input);
  if (!cfg.input.empty() && input.is_relative()) {
    cfg.input = (file.parent_path() / input).lexically_normal().string();
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["dataset"] = cfg.dataset;
  j["input"] = cfg.input;
  j["uncensored_only"] = cfg.uncensored_only;
  j["b"] = optional_number(cfg.bin_size);
  j["t_max"] = optional_number(cfg.t_max);
  j["k_fraction"] = cfg.k_fraction;
  j["epsilons"] = cfg.epsilons;
  j["method"] = std::string(mechanism_name(cfg.method));
  j["path"] = cfg.path ? std::string(path_name(*cfg.path)) : "centralized";
  j["clients"] = cfg.clients;
  j["split"] = cfg.minority_fraction
                   ? json{{"minority_fraction", *cfg.minority_fraction}}
                   : json(nullptr);
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["bootstrap_resamples"] = cfg.bootstrap_resamples;
  j["alpha"] = cfg.alpha;
  j["resplit_per_run"] = cfg.resplit_per_run;
  j["prob_sensitivity"] = std::string(rule_name(cfg.prob_rule));
  j["sensitivity_mode"] = std::string(mode_name(cfg.sensitivity_mode));
  j["acknowledge_non_dp"] = cfg.acknowledge_non_dp;
  j["surrogate_n"] = cfg.surrogate_n ? json(*cfg.surrogate_n) : json(nullptr);
  j["reference"] = cfg.reference == ReferenceKind::kRaw ? "raw" : "discretized";
  j["threads"] = cfg.threads;
  return j.dump(2);
}

ExperimentConfig resolve_config(ExperimentConfig cfg,
                                const DatasetSummary& file) {
  if (!cfg.bin_size) {
    cfg.bin_size = default_bin_size(cfg.dataset, cfg.method);
    if (!cfg.bin_size) {
      throw ConfigError("no default b for dataset '" + cfg.dataset +
                        "'; set b explicitly");
    }
  }
  if (!cfg.t_max) {
    if (!(file.max_duration > 0.0)) {
      throw ConfigError("largest duration is 0; set t_max explicitly");
    }
    cfg.t_max = file.max_duration;
  }
  return cfg;
}

PathId effective_path(const ExperimentConfig& cfg) {
  return cfg.path.value_or(centralized_path(cfg.method));
}

int effective_clients(const ExperimentConfig& cfg) {
  return cfg.path ? cfg.clients : 1;
}

TableRow report_row(const MetricReport& r) {
  TableRow row;
  row.runs = 1;
  row.cells[kPValue].value = r.p_value;
  row.cells[kMedian] = {r.median.median, r.median.lower, r.median.upper, 0};
  if (!r.median.median) row.cells[kMedian].undefined = 1;
  for (std::size_t i = 0; i < r.survival.size(); ++i) {
    const SurvivalPoint& p = r.survival[i];
    row.cells[kS25 + i] = {p.value, p.lower, p.upper, 0};
  }
  return row;
}

TableRow baseline_row(const SurvivalDataset& records, const TimeGrid& grid,
                      const SurvivalDataset& reference, double alpha) {
  TableRow row =
      report_row(evaluate(discretize(records, grid), grid, &reference, alpha));
  row.method = "non-dp";
  return row;
}

TableRow summarize(const ExperimentResult& result, Mechanism method,
                   double epsilon, int clients, int runs) {
  TableRow row;
  row.method = std::string(mechanism_name(method));
  row.epsilon = epsilon;
  row.path = std::string(path_name(result.path));
  row.clients = clients;
  row.runs = runs;
  row.degenerate_releases = result.degenerate_releases;
  for (std::size_t m = 0; m < result.metrics.size(); ++m) {
    const MetricSummary& s = result.metrics[m];
    row.cells[m].undefined = s.undefined;
    if (s.ci)
      row.cells[m] = {s.ci->mean, s.ci->lower, s.ci->upper, s.undefined};
  }
  return row;
}

ResultTable run_experiment(const ExperimentConfig& cfg,
                           const LoadedDataset& data) {
  if (!cfg.bin_size || !cfg.t_max) {
    throw std::invalid_argument("run_experiment: config is not resolved");
  }
  const TimeGrid grid(*cfg.t_max, *cfg.bin_size);
  const SurvivalDataset reference = cfg.reference == ReferenceKind::kRaw
                                        ? data.records
                                        : discretize(data.records, grid);
  ResultTable table;
  table.config_json = config_to_json(cfg);
  table.dataset = cfg.dataset;
  table.file = data.file;
  table.records = static_cast<std::int64_t>(data.records.size());
  table.rows.push_back(baseline_row(data.records, grid, reference, cfg.alpha));

  const PathId path = effective_path(cfg);
  for (double eps : cfg.epsilons) {
    CollabConfig cc(grid, PrivacyBudget(eps));
    cc.k_fraction = cfg.k_fraction;
    cc.sensitivity_mode = cfg.sensitivity_mode;
    cc.acknowledge_non_dp = cfg.acknowledge_non_dp;
    cc.prob_rule = cfg.prob_rule;
    cc.global_surrogate_n = cfg.surrogate_n;
    cc.alpha = cfg.alpha;
    cc.clients = effective_clients(cfg);
    cc.split.minority_fraction = cfg.minority_fraction;
    cc.runs = cfg.runs;
    cc.master_seed = cfg.seed;
    cc.resplit_per_run = cfg.resplit_per_run;
    cc.bootstrap_resamples = cfg.bootstrap_resamples;
    cc.threads = cfg.threads;
    const ExperimentResult res = monte_carlo(path, data.records, reference, cc);
    TableRow row = summarize(res, cfg.method, eps, cc.clients, cfg.runs);
    if (!cfg.path) row.path.clear();
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_table_csv(const ResultTable& table, std::ostream& out) {
  out << "dataset,method,epsilon,path,clients,runs";
  for (std::string_view name : kMetricNames) {
    out << ',' << name << ',' << name << "_lower," << name << "_upper";
  }
  for (std::string_view name : kMetricNames) out << ",undefined_" << name;
  out << ",degenerate_releases\n";
  auto cell = [&out](const std::optional<double>& v) {
    out << ',';
    if (v) out << table_number(*v);
  };
  for (const TableRow& row : table.rows) {
    out << table.dataset << ',' << row.method << ',';
    if (row.epsilon) out << table_number(*row.epsilon);
    out << ',' << row.path << ',' << row.clients << ',' << row.runs;
    for (const MetricCell& c : row.cells) {
      cell(c.value);
      cell(c.lower);
      cell(c.upper);
    }
    for (const MetricCell& c : row.cells) out << ',' << c.undefined;
    out << ',' << row.degenerate_releases << '\n';
  }
}

std::string table_to_json(const ResultTable& table) {
  json rows = json::array();
  for (const TableRow& row : table.rows) {
    json metrics;
    for (std::size_t m = 0; m < row.cells.size(); ++m) {
      const MetricCell& c = row.cells[m];
      metrics[std::string(kMetricNames[m])] = {
          {"value", optional_number(c.value)},
          {"lower", optional_number(c.lower)},
          {"upper", optional_number(c.upper)},
          {"undefined", c.undefined}};
    }
    rows.push_back({{"method", row.method},
                    {"epsilon", optional_number(row.epsilon)},
                    {"path", row.path},
                    {"clients", row.clients},
                    {"runs", row.runs},
                    {"degenerate_releases", row.degenerate_releases},
                    {"metrics", metrics}});
  }
  json j;
  j["config"] = json::parse(table.config_json);
  j["seed"] = j["config"]["seed"];
  j["dataset"] = table.dataset;
  j["file"] = {{"records", table.file.records},
               {"censored", table.file.censored},
               {"max_duration", table.file.max_duration}};
  j["records"] = table.records;
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

ResultTable table_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    ResultTable table;
    table.config_json = j.at("config").dump(2);
    table.dataset = j.at("dataset").get<std::string>();
    const json& f = j.at("file");
    table.file = {f.at("records").get<std::int64_t>(),
                  f.at("censored").get<std::int64_t>(),
                  f.at("max_duration").get<double>()};
    table.records = j.at("records").get<std::int64_t>();
    for (const json& r : j.at("rows")) {
      TableRow row;
      row.method = r.at("method").get<std::string>();
      row.epsilon = number_or_empty(r.at("epsilon"));
      row.path = r.at("path").get<std::string>();
      row.clients = r.at("clients").get<int>();
      row.runs = r.at("runs").get<int>();
      row.degenerate_releases = r.at("degenerate_releases").get<int>();
      for (std::size_t m = 0; m < row.cells.size(); ++m) {
        const json& c = r.at("metrics").at(std::string(kMetricNames[m]));
        row.cells[m] = {
            number_or_empty(c.at("value")), number_or_empty(c.at("lower")),
            number_or_empty(c.at("upper")), c.at("undefined").get<int>()};
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad result file: ") + e.what());
  }
}

}  // namespace survdp
