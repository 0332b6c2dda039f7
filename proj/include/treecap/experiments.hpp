#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace treecap {

/// Configuration of one experiment run. Every randomized quantity derives
/// from `master_seed` through per-instance substreams, so a config fully
/// determines the numeric content of the report. `options` carries the
/// per-experiment knobs; run_experiment fills in defaults for anything
/// missing and echoes the effective values back into the report.
struct ExperimentConfig {
  std::string name;
  std::uint64_t master_seed = 1;
  nlohmann::json options = nlohmann::json::object();

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Result of one experiment: per-instance records, aggregate statistics and
/// the pass/fail flags of every asserted inequality. Records and aggregates
/// are reproduced bit-identically by identical configs; `meta` (timings) is
/// excluded from that guarantee.
struct ExperimentReport {
  std::string name;
  nlohmann::json config;
  std::vector<nlohmann::json> records;
  nlohmann::json aggregate;
  std::vector<std::string> csv_columns;
  bool all_pass = false;
  nlohmann::json meta;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Known experiment names, in the order the CLI lists them.
const std::vector<std::string>& experiment_names();

/// Runs the named experiment. Unknown names throw std::invalid_argument.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes a report to `path` in "json" or "csv" format.
void write_report(const ExperimentReport& report, const std::string& format,
                  const std::string& path);

}  // namespace treecap
