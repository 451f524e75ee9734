#include "sdflow/cli/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sdflow/criticality.hpp"
#include "sdflow/diagnostics.hpp"
#include "sdflow/errors.hpp"
#include "sdflow/holder.hpp"
#include "sdflow/linearization.hpp"

namespace sdflow::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Preset {
  const char* text;
  const char* description;
};

const std::map<std::string, Preset>& registry() {
  static const std::map<std::string, Preset> presets = {
      {"stab_r1.5",
       {"mode = full2d\nr = 1.5\nn_x = 128\nn_theta = 16\nic = sine(1, 0.01)\nt_end = 20\n",
        "stable cylinder, r > 1"}},
      {"axisym_stab",
       {"mode = axisym\nr = 1.5\nn_x = 128\nic = sine(1, 0.01)\nt_end = 10\n",
        "stable cylinder, r > 1, axisymmetric"}},
      {"instab_r0.7",
       {"mode = full2d\nr = 0.7\nn_x = 128\nn_theta = 16\nic = sine(1, 1e-4)\nt_end = 6.5\n",
        "unstable cylinder, r < 1"}},
      {"axisym_instab",
       {"mode = axisym\nr = 0.7\nn_x = 128\nic = sine(1, 1e-4)\nt_end = 6.5\n",
        "unstable cylinder, r < 1, axisymmetric"}},
      {"dualnorm",
       {"mode = full2d\nr = 1.5\nn_x = 128\nn_theta = 16\nic = sine(1, 0.01)\nt_end = 20\n",
        "rates in bc^{1+alpha} and bc^{3+alpha} agree"}},
  };
  return presets;
}

std::string rational_text(Rational q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

json rate_json(const TimeSeries& series, RateWindow window) {
  try {
    const RateEstimate est = estimate_rate(series, window);
    return {{"rate", est.rate},
            {"r_squared", est.r_squared},
            {"samples", est.samples},
            {"reliable", est.reliable()}};
  } catch (const Error& e) {
    return {{"rate", nullptr}, {"error", e.what()}};
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [name, preset] : registry()) names.push_back(name);
  names.push_back("ledger");
  return names;
}

RunConfig experiment_config(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    throw ConfigError(name == "ledger" ? "experiment 'ledger' has no run configuration"
                                       : "unknown experiment '" + name + "'");
  }
  std::istringstream in(it->second.text);
  RunConfig cfg = apply_overrides(RunConfig{}, parse_key_values(in, name));
  cfg.output_dir = "runs/" + name;
  return cfg;
}

json summarize(const RunConfig& cfg, const RunRecord& record) {
  const Grid grid = cfg.grid();
  json s;
  s["termination"] = to_string(record.termination);
  s["diagnosis"] = record.diagnosis;
  s["t_final"] = record.t_final;
  s["steps"] = record.steps;
  s["rejected_steps"] = record.rejected_steps;
  s["max_volume_drift"] = record.max_volume_drift;
  s["max_area_increase"] = record.max_area_increase;
  if (cfg.ic.kind == InitialCondition::Kind::random) s["seed"] = cfg.ic.seed;

  const double begin = transient_end(grid);
  double end = begin;
  for (const RunRow& row : record.rows) {
    if (row.t < begin) continue;
    if (std::sqrt(2.0) * row.fit_residual > cfg.fit_amplitude_max) break;
    end = row.t;
  }
  TimeSeries residual, low, high;
  for (const RunRow& row : record.rows) {
    residual.emplace_back(row.t, row.fit_residual);
    low.emplace_back(row.t, row.norm_1a);
    high.emplace_back(row.t, row.norm_3a);
  }
  const RateWindow window{begin, end};
  s["fit_window"] = {window.t_begin, window.t_end};
  json fit = rate_json(residual, window);
  s["fitted_rate"] = fit["rate"];
  s["fit"] = fit;
  if (cfg.ic.kind == InitialCondition::Kind::sine || cfg.ic.kind == InitialCondition::Kind::sine2d) {
    const double expected = dispersion(cfg.ic.k, cfg.ic.m, cfg.r);
    s["expected_rate"] = expected;
    if (fit["rate"].is_number() && expected != 0.0) {
      s["relative_error"] = std::abs(fit["rate"].get<double>() - expected) / std::abs(expected);
    }
  }
  json dual = {{"norm_1a", rate_json(low, window)}, {"norm_3a", rate_json(high, window)}};
  if (dual["norm_1a"]["rate"].is_number() && dual["norm_3a"]["rate"].is_number()) {
    const double a = dual["norm_1a"]["rate"].get<double>();
    const double b = dual["norm_3a"]["rate"].get<double>();
    dual["relative_disagreement"] = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  }
  s["dual_norm_rates"] = dual;
  json snaps = json::array();
  for (const auto& [t, path] : record.snapshots) snaps.push_back({{"t", t}, {"path", path}});
  s["snapshots"] = snaps;
  return s;
}

ExperimentResult simulate(const RunConfig& cfg, const std::string& name) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  if (!cfg.snapshot_times.empty()) fs::create_directories(cfg.output_dir + "/snapshots");

  const Grid grid = cfg.grid();
  const HeightField h0 = make_initial_condition(grid, cfg.ic);
  StepConfig step = cfg.step;
  if (cfg.auto_dt) step.dt = initial_dt(h0, step);

  RunRecord record = run(h0, cfg.t_end, step, cfg.probes());

  ExperimentResult result;
  result.name = name;
  result.output_dir = cfg.output_dir;
  result.summary = summarize(cfg, record);
  result.summary["name"] = name;
  result.summary["config"] = to_text(cfg);

  std::ostringstream csv;
  write_csv(csv, record);
  write_text(fs::path(cfg.output_dir) / "run.csv", csv.str());
  write_text(fs::path(cfg.output_dir) / "config.txt", to_text(cfg));
  write_text(fs::path(cfg.output_dir) / "summary.json", result.summary.dump(2) + "\n");
  result.record = std::move(record);
  return result;
}

ExperimentResult run_experiment(const std::string& name, const Overrides& overrides) {
  if (name == "ledger") {
    std::string dir = "runs/ledger";
    for (const auto& [key, value] : overrides) {
      if (key == "output.dir") dir = value;
      else throw ConfigError("experiment 'ledger' takes no override '" + key + "'");
    }
    ExperimentResult result;
    result.name = name;
    result.output_dir = dir;
    result.summary = ledger_json();
    fs::create_directories(dir);
    write_text(fs::path(dir) / "summary.json", result.summary.dump(2) + "\n");
    return result;
  }
  RunConfig cfg = experiment_config(name);
  cfg = apply_overrides(cfg, overrides);
  ExperimentResult result = simulate(cfg, name);
  result.summary["description"] = registry().at(name).description;
  write_text(fs::path(cfg.output_dir) / "summary.json", result.summary.dump(2) + "\n");
  return result;
}

json ledger_json() {
  const WeightSystem ws = sdflow_ledger();
  json pairs = json::array();
  for (const CriticalPair& p : ws.pairs) {
    pairs.push_back({{"rho", rational_text(p.rho)},
                     {"beta_j", rational_text(p.beta_j)},
                     {"class", to_string(p.cls)},
                     {"multiplicity", p.multiplicity}});
  }
  return {{"mu", rational_text(ws.mu)},
          {"beta", rational_text(ws.beta)},
          {"mu_crit", rational_text(ws.mu_crit())},
          {"critical_count", ws.critical().size()},
          {"multiplicity_approximate", ws.multiplicity_approximate},
          {"pairs", pairs}};
}

json dispersion_json(double r, int k_max, int m_max) {
  const DispersionTable table = classify_stability(r, k_max, m_max);
  auto mode = [](const ModeRate& m) {
    return json{{"k", m.k}, {"m", m.m}, {"lambda", m.lambda}, {"class", to_string(m.cls)}};
  };
  json unstable = json::array();
  for (const ModeRate& m : table.unstable_modes()) unstable.push_back(mode(m));
  json zero = json::array();
  for (const ModeRate& m : table.zero_modes()) zero.push_back(mode(m));
  json out = {{"r", r},
              {"k_max", k_max},
              {"m_max", m_max},
              {"verdict", to_string(table.verdict)},
              {"neutral_dimension", table.neutral_dimension()},
              {"unstable_modes", unstable},
              {"zero_modes", zero}};
  if (const ModeRate* s = table.slowest_stable()) out["slowest_stable"] = mode(*s);
  return out;
}

json norms_json(const HeightField& h, double alpha) {
  json norms = json::array();
  for (int k = 0; k <= 4; ++k) {
    const HolderNorm n = holder_norm(h, k, alpha);
    norms.push_back({{"k", k}, {"value", n.value}, {"sampled", n.sampled}});
  }
  json out = {{"alpha", alpha},
              {"n_x", h.grid().n_x()},
              {"n_theta", h.grid().n_theta()},
              {"r", h.grid().r()},
              {"norms", norms}};
  if (h.max_abs() > 0.0) out["interpolation_ratio"] = interpolation_ratio(h, alpha);
  return out;
}

int exit_code(const RunRecord& record) {
  return record.termination == Termination::completed ? 0 : 2;
}

}  // namespace sdflow::cli
