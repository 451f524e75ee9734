#include "sdflow/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "sdflow/diagnostics.hpp"
#include "sdflow/errors.hpp"

namespace sdflow::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(d)) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return d;
}

long long to_integer(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0') throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return n;
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!s.empty() && s.back() == ',') out.push_back("");
  return out;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "mode",         "r",           "n_x",          "n_theta",        "alpha",
      "epsilon",      "ic",          "amplitude",    "t_end",          "step.dt",
      "step.inner_tol", "step.inner_max", "step.dt_min", "step.dt_max", "step.safety",
      "probe.cadence", "probe.norm_bound", "snapshot.times", "output.dir",
      "fit.amplitude_max"};
  return keys;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "mode") {
    const std::string v = trim(value);
    if (v == "axisym") cfg.mode = Mode::axisym;
    else if (v == "full2d") cfg.mode = Mode::full2d;
    else throw ConfigError("mode: expected axisym or full2d, got '" + v + "'");
  } else if (key == "r") {
    cfg.r = to_double(key, value);
  } else if (key == "n_x") {
    cfg.n_x = static_cast<int>(to_integer(key, value));
  } else if (key == "n_theta") {
    cfg.n_theta = static_cast<int>(to_integer(key, value));
  } else if (key == "alpha") {
    cfg.alpha = to_double(key, value);
  } else if (key == "epsilon") {
    cfg.epsilon = to_double(key, value);
  } else if (key == "ic") {
    cfg.ic = parse_initial_condition(value);
  } else if (key == "amplitude") {
    if (cfg.ic.kind == InitialCondition::Kind::flat ||
        cfg.ic.kind == InitialCondition::Kind::shifted_cylinder) {
      throw ConfigError("amplitude: initial condition " + to_string(cfg.ic) + " has no amplitude");
    }
    cfg.ic.amplitude = to_double(key, value);
  } else if (key == "t_end") {
    cfg.t_end = to_double(key, value);
  } else if (key == "step.dt") {
    cfg.step.dt = to_double(key, value);
    cfg.auto_dt = false;
  } else if (key == "step.inner_tol") {
    cfg.step.inner_tol = to_double(key, value);
  } else if (key == "step.inner_max") {
    cfg.step.inner_max = static_cast<int>(to_integer(key, value));
  } else if (key == "step.dt_min") {
    cfg.step.dt_min = to_double(key, value);
  } else if (key == "step.dt_max") {
    cfg.step.dt_max = to_double(key, value);
  } else if (key == "step.safety") {
    cfg.step.safety = to_double(key, value);
  } else if (key == "probe.cadence") {
    cfg.cadence = to_double(key, value);
  } else if (key == "probe.norm_bound") {
    cfg.norm_bound = to_double(key, value);
  } else if (key == "snapshot.times") {
    cfg.snapshot_times.clear();
    if (!trim(value).empty()) {
      for (const std::string& item : split_args(value)) {
        cfg.snapshot_times.push_back(to_double(key, item));
      }
    }
  } else if (key == "output.dir") {
    cfg.output_dir = trim(value);
  } else if (key == "fit.amplitude_max") {
    cfg.fit_amplitude_max = to_double(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

}  // namespace

InitialCondition parse_initial_condition(const std::string& text) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  const std::string name = trim(s.substr(0, open));
  std::vector<std::string> args;
  if (open != std::string::npos) {
    if (s.back() != ')') throw ConfigError("ic: missing ')' in '" + s + "'");
    args = split_args(s.substr(open + 1, s.size() - open - 2));
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n) {
      throw ConfigError("ic: " + name + " takes " + std::to_string(n) + " argument(s), got '" + s +
                        "'");
    }
  };
  InitialCondition ic;
  if (name == "flat") {
    if (open != std::string::npos) want(0);
    ic.kind = InitialCondition::Kind::flat;
  } else if (name == "sine") {
    want(2);
    ic.kind = InitialCondition::Kind::sine;
    ic.k = static_cast<int>(to_integer("ic.k", args[0]));
    ic.amplitude = to_double("ic.amplitude", args[1]);
  } else if (name == "sine2d") {
    want(3);
    ic.kind = InitialCondition::Kind::sine2d;
    ic.k = static_cast<int>(to_integer("ic.k", args[0]));
    ic.m = static_cast<int>(to_integer("ic.m", args[1]));
    ic.amplitude = to_double("ic.amplitude", args[2]);
  } else if (name == "shifted_cylinder") {
    want(1);
    ic.kind = InitialCondition::Kind::shifted_cylinder;
    ic.delta = to_double("ic.delta", args[0]);
  } else if (name == "random") {
    want(3);
    ic.kind = InitialCondition::Kind::random;
    const long long seed = to_integer("ic.seed", args[0]);
    if (seed < 0) throw ConfigError("ic: random seed must be non-negative");
    ic.seed = static_cast<std::uint64_t>(seed);
    ic.degree = static_cast<int>(to_integer("ic.degree", args[1]));
    ic.amplitude = to_double("ic.amplitude", args[2]);
    if (ic.degree < 1) throw ConfigError("ic: random degree must be at least 1");
  } else {
    throw ConfigError("ic: unknown preset '" + name + "'");
  }
  if (ic.k < 0 || ic.m < 0) throw ConfigError("ic: wavenumbers must be non-negative");
  return ic;
}

std::string to_string(const InitialCondition& ic) {
  switch (ic.kind) {
    case InitialCondition::Kind::flat: return "flat";
    case InitialCondition::Kind::sine:
      return "sine(" + std::to_string(ic.k) + ", " + fmt(ic.amplitude) + ")";
    case InitialCondition::Kind::sine2d:
      return "sine2d(" + std::to_string(ic.k) + ", " + std::to_string(ic.m) + ", " +
             fmt(ic.amplitude) + ")";
    case InitialCondition::Kind::shifted_cylinder:
      return "shifted_cylinder(" + fmt(ic.delta) + ")";
    case InitialCondition::Kind::random:
      return "random(" + std::to_string(ic.seed) + ", " + std::to_string(ic.degree) + ", " +
             fmt(ic.amplitude) + ")";
  }
  return "flat";
}

HeightField make_initial_condition(const Grid& grid, const InitialCondition& ic) {
  switch (ic.kind) {
    case InitialCondition::Kind::flat:
      return Field(grid, 0.0);
    case InitialCondition::Kind::sine:
      return Field::sample(grid, [&](double x, double) { return ic.amplitude * std::sin(ic.k * grid.axial_scale() * x); });
    case InitialCondition::Kind::sine2d:
      if (grid.axisymmetric() && ic.m != 0) {
        throw ConfigError("ic: sine2d with m != 0 needs mode = full2d");
      }
      return Field::sample(grid, [&](double x, double t) {
        return ic.amplitude * std::sin(ic.k * grid.axial_scale() * x) * std::cos(ic.m * t);
      });
    case InitialCondition::Kind::shifted_cylinder:
      if (grid.axisymmetric()) throw ConfigError("ic: shifted_cylinder needs mode = full2d");
      if (!(std::abs(ic.delta) < grid.r())) {
        throw ConfigError("ic: shifted_cylinder needs |delta| < r");
      }
      return cylinder_height(grid, ic.delta, 0.0, grid.r());
    case InitialCondition::Kind::random: {
      std::mt19937_64 gen(ic.seed);
      auto uniform = [&gen] {
        return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
      };
      const int md = grid.axisymmetric() ? 0 : ic.degree;
      const double kx = grid.axial_scale();
      Field h(grid, 0.0);
      for (int k = 0; k <= ic.degree; ++k) {
        for (int m = -md; m <= md; ++m) {
          if (k == 0 && m <= 0) continue;
          const double a = uniform();
          const double b = uniform();
          for (int i = 0; i < grid.n_x(); ++i) {
            for (int j = 0; j < grid.n_theta(); ++j) {
              const double phase = k * kx * grid.x(i) + m * grid.theta(j);
              h(i, j) += a * std::cos(phase) + b * std::sin(phase);
            }
          }
        }
      }
      const double peak = h.max_abs();
      if (peak > 0.0) h *= ic.amplitude / peak;
      return h;
    }
  }
  return Field(grid, 0.0);
}

Grid RunConfig::grid() const {
  try {
    return Grid(n_x, mode == Mode::axisym ? 1 : n_theta, r);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

ProbeConfig RunConfig::probes() const {
  ProbeConfig p;
  p.cadence = cadence;
  p.alpha = alpha;
  p.norm_bound = norm_bound;
  p.epsilon = epsilon;
  p.snapshot_times = snapshot_times;
  if (!snapshot_times.empty()) p.snapshot_dir = output_dir + "/snapshots";
  return p;
}

void RunConfig::validate() const {
  if (!(r > 0.0)) throw ConfigError("r: must be positive, got " + fmt(r));
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1)");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon: must be non-negative");
  if (!(t_end >= 0.0)) throw ConfigError("t_end: must be non-negative");
  if (!(cadence > 0.0)) throw ConfigError("probe.cadence: must be positive");
  if (!(norm_bound > 0.0)) throw ConfigError("probe.norm_bound: must be positive");
  if (!(fit_amplitude_max > 0.0)) throw ConfigError("fit.amplitude_max: must be positive");
  if (output_dir.empty()) throw ConfigError("output.dir: must not be empty");
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= t_end)) throw ConfigError("snapshot.times: " + fmt(t) + " outside [0, t_end]");
  }
  StepConfig s = step;
  if (auto_dt) s.dt = s.dt_min;
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("step: ") + e.what());
  }
  const HeightField h = make_initial_condition(grid(), ic);
  if (!(h.min() > epsilon - r)) {
    throw ConfigError("ic: " + to_string(ic) + " is not admissible: min(h) = " + fmt(h.min()) +
                      " <= epsilon - r = " + fmt(epsilon - r));
  }
}

Overrides parse_key_values(std::istream& in, const std::string& source) {
  Overrides out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, sep));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(source + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    }
    out.emplace_back(key, trim(line.substr(sep + 1)));
  }
  return out;
}

RunConfig apply_overrides(RunConfig base, const Overrides& overrides) {
  // Preset first so "amplitude" applies regardless of order.
  for (const auto& [key, value] : overrides) {
    if (key == "ic") set_key(base, key, value);
  }
  for (const auto& [key, value] : overrides) {
    if (key != "ic") set_key(base, key, value);
  }
  base.validate();
  return base;
}

RunConfig parse_config(const std::string& path, const Overrides& flags) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Overrides all = parse_key_values(in, path);
  all.insert(all.end(), flags.begin(), flags.end());
  return apply_overrides(RunConfig{}, all);
}

Overrides parse_flags(const std::vector<std::string>& args) {
  Overrides out;
  for (const std::string& a : args) {
    if (a.rfind("--", 0) != 0) throw ConfigError("expected --key=value, got '" + a + "'");
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("flag '" + a + "' needs a value (--key=value)");
    const std::string key = a.substr(2, eq - 2);
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown flag '--" + key + "'");
    }
    out.emplace_back(key, a.substr(eq + 1));
  }
  return out;
}

std::string to_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "mode = " << (cfg.mode == Mode::axisym ? "axisym" : "full2d") << "\n";
  out << "r = " << fmt(cfg.r) << "\n";
  out << "n_x = " << cfg.n_x << "\n";
  out << "n_theta = " << cfg.n_theta << "\n";
  out << "alpha = " << fmt(cfg.alpha) << "\n";
  out << "epsilon = " << fmt(cfg.epsilon) << "\n";
  out << "ic = " << to_string(cfg.ic) << "\n";
  out << "t_end = " << fmt(cfg.t_end) << "\n";
  if (!cfg.auto_dt) out << "step.dt = " << fmt(cfg.step.dt) << "\n";
  out << "step.inner_tol = " << fmt(cfg.step.inner_tol) << "\n";
  out << "step.inner_max = " << cfg.step.inner_max << "\n";
  out << "step.dt_min = " << fmt(cfg.step.dt_min) << "\n";
  out << "step.dt_max = " << fmt(cfg.step.dt_max) << "\n";
  out << "step.safety = " << fmt(cfg.step.safety) << "\n";
  out << "probe.cadence = " << fmt(cfg.cadence) << "\n";
  out << "probe.norm_bound = " << fmt(cfg.norm_bound) << "\n";
  out << "snapshot.times = ";
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
    out << (i ? ", " : "") << fmt(cfg.snapshot_times[i]);
  }
  out << "\n";
  out << "output.dir = " << cfg.output_dir << "\n";
  out << "fit.amplitude_max = " << fmt(cfg.fit_amplitude_max) << "\n";
  return out.str();
}

}  // namespace sdflow::cli
