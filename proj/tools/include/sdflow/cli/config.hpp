#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdflow/grid.hpp"
#include "sdflow/stepping.hpp"

namespace sdflow::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { axisym, full2d };

struct InitialCondition {
  enum class Kind { flat, sine, sine2d, shifted_cylinder, random };
  Kind kind = Kind::flat;
  int k = 1;
  int m = 0;
  double amplitude = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  int degree = 0;
};

/// Parses "flat", "sine(k, a)", "sine2d(k, m, a)", "shifted_cylinder(d)",
/// "random(seed, degree, a)".
InitialCondition parse_initial_condition(const std::string& text);
std::string to_string(const InitialCondition& ic);

/// flat: 0. sine: a sin(kx). sine2d: a sin(kx) cos(m theta).
/// shifted_cylinder: exact graph of the radius-r cylinder with axis at y = d.
/// random: sum of a_km cos(kx + m theta) + b_km sin(kx + m theta) over
/// 0 <= k, |m| <= degree (m = 0 on axisymmetric grids), coefficients uniform
/// in [-1, 1] from mt19937_64, rescaled to max |h| = a.
HeightField make_initial_condition(const Grid& grid, const InitialCondition& ic);

struct RunConfig {
  Mode mode = Mode::axisym;
  double r = 1.5;
  int n_x = 128;
  int n_theta = 16;  // ignored in axisym mode
  double alpha = 0.5;
  double epsilon = 0.0;
  InitialCondition ic;
  double t_end = 1.0;
  StepConfig step;
  bool auto_dt = true;  // step.dt unset: use initial_dt
  double cadence = 0.1;
  double norm_bound = 100.0;
  std::vector<double> snapshot_times;
  std::string output_dir = "out";
  /// Upper end of the rate-fit window: last time the fitted amplitude
  /// sqrt(2) * fit_residual stays at or below this value.
  double fit_amplitude_max = 0.05;

  Grid grid() const;
  ProbeConfig probes() const;
  /// Throws ConfigError on invalid values, including an inadmissible
  /// initial condition.
  void validate() const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Key-value text, one "key = value" or "key: value" per line, '#' comments.
/// Keys: mode, r, n_x, n_theta, alpha, epsilon, ic, amplitude, t_end,
/// step.dt, step.inner_tol, step.inner_max, step.dt_min, step.dt_max,
/// step.safety, probe.cadence, probe.norm_bound, snapshot.times,
/// output.dir, fit.amplitude_max. "amplitude" rewrites the amplitude of the
/// initial condition. Unknown keys are errors.
Overrides parse_key_values(std::istream& in, const std::string& source);

/// Applies overrides in order on top of base, then validates.
RunConfig apply_overrides(RunConfig base, const Overrides& overrides);

/// File values first, then flags (later wins).
RunConfig parse_config(const std::string& path, const Overrides& flags = {});

/// Parses "--key=value" tokens.
Overrides parse_flags(const std::vector<std::string>& args);

/// Round-trips through parse_key_values / apply_overrides.
std::string to_text(const RunConfig& cfg);

}  // namespace sdflow::cli
