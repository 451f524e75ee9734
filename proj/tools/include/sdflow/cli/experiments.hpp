#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sdflow/cli/config.hpp"
#include "sdflow/stepping.hpp"

namespace sdflow::cli {

struct ExperimentResult {
  std::string name;
  std::optional<RunRecord> record;
  nlohmann::json summary;
  std::string output_dir;
};

std::vector<std::string> experiment_names();

/// Default configuration of a named run experiment. Throws ConfigError for
/// unknown names and for "ledger", which has no run.
RunConfig experiment_config(const std::string& name);

/// Runs an experiment and writes run.csv, summary.json, config.txt and
/// snapshots under output.dir (default runs/<name>). Overrides may also
/// carry "output.dir". Deterministic given the configuration.
ExperimentResult run_experiment(const std::string& name, const Overrides& overrides);

/// Executes an arbitrary configuration; writes the same files.
ExperimentResult simulate(const RunConfig& cfg, const std::string& name = "simulate");

nlohmann::json summarize(const RunConfig& cfg, const RunRecord& record);
nlohmann::json ledger_json();
nlohmann::json dispersion_json(double r, int k_max, int m_max);
nlohmann::json norms_json(const HeightField& h, double alpha);

/// 0 completed, 2 early termination.
int exit_code(const RunRecord& record);

}  // namespace sdflow::cli
