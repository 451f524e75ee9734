#include "sdflow/stepping.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sdflow/diagnostics.hpp"
#include "sdflow/errors.hpp"
#include "sdflow/spectral.hpp"

namespace sdflow {

void StepConfig::validate() const {
  if (!(dt_min > 0.0) || !(dt_max >= dt_min)) throw InvalidArgument("need 0 < dt_min <= dt_max");
  if (!(dt >= dt_min && dt <= dt_max)) throw InvalidArgument("dt must lie in [dt_min, dt_max]");
  if (!(inner_tol >= 1e-14 && inner_tol <= 1e-4)) {
    throw InvalidArgument("inner_tol must lie in [1e-14, 1e-4]");
  }
  if (inner_max < 1) throw InvalidArgument("inner_max must be positive");
  if (!(safety > 0.0 && safety <= 1.0)) throw InvalidArgument("safety must lie in (0, 1]");
}

StepResult step(const HeightField& h, const StepConfig& cfg, double epsilon) {
  require_admissible(h, epsilon);
  const double dt = cfg.dt;
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
  const FrozenOperator frozen(h);
  const double r = h.grid().r();

  StepResult result{h, {}};
  result.stats.dt_used = dt;
  Field v = h;
  double previous_increment = 0.0;
  int growing = 0;
  for (int sweep = 1; sweep <= cfg.inner_max; ++sweep) {
    Field g = dealias(sd_operator(v, epsilon));
    Field rhs = frozen.apply(v);
    rhs += g;
    rhs *= dt;
    rhs += h;
    Field w = inner_solve(frozen, rhs, dt);
    require_admissible(w, epsilon);

    const double increment = (w - v).max_abs();
    result.stats.inner_iterations = sweep;
    result.stats.last_increment = increment;
    if (sweep > 1 && previous_increment > 0.0) {
      const double ratio = increment / previous_increment;
      result.stats.contraction_estimate = std::max(result.stats.contraction_estimate, ratio);
      growing = ratio >= 1.0 ? growing + 1 : 0;
    }
    v = std::move(w);
    if (increment <= cfg.inner_tol * std::max(v.max_abs(), 1e-6 * r)) {
      result.h = std::move(v);
      result.stats.accepted = result.stats.contraction_estimate < 1.0;
      if (!result.stats.accepted) result.h = h;
      return result;
    }
    if (growing >= 2) break;
    previous_increment = increment;
  }
  result.stats.accepted = false;
  result.h = h;
  return result;
}

double adapt_dt(const StepStats& stats, const StepConfig& cfg, int& calm_streak) {
  const double dt = cfg.dt;
  if (!stats.accepted || stats.contraction_estimate > 0.5) {
    calm_streak = 0;
    if (dt <= cfg.dt_min) {
      throw ConvergenceError("fixed-point iteration does not contract at dt_min = " +
                                 std::to_string(cfg.dt_min),
                             stats.inner_iterations);
    }
    return std::max(0.5 * dt, cfg.dt_min);
  }
  if (stats.contraction_estimate < 0.1) {
    if (++calm_streak >= 5) {
      calm_streak = 0;
      return std::min(1.25 * dt, cfg.dt_max);
    }
  } else {
    calm_streak = 0;
  }
  return dt;
}

double initial_dt(const HeightField& h, const StepConfig& cfg) {
  const double slope = spectral_derivative(h, 1, 0).field.max_abs();
  const double dx = h.grid().dx();
  const double q = 1.0 + slope * slope;
  const double dt = cfg.safety * 0.25 * dx * dx * dx * dx * q * q;
  return std::clamp(dt, cfg.dt_min, cfg.dt_max);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::axis_contact: return "axis_contact";
    case Termination::norm_bound: return "norm_bound";
    case Termination::non_contraction: return "non_contraction";
  }
  return "?";
}

namespace {

RunRow probe_row(const HeightField& h, double t, double dt, int inner_iters,
                 const ProbeConfig& probes) {
  RunRow row;
  row.t = t;
  row.dt = dt;
  row.inner_iters = inner_iters;
  const DualNorms norms = dual_norm_monitor(h, probes.alpha, probes.holder);
  row.norm_1a = norms.low;
  row.norm_3a = norms.high;
  row.volume = enclosed_volume(h);
  row.area = surface_area(h);
  const CylinderFit fit = fit_cylinder(h);
  row.fit_y = fit.y_bar;
  row.fit_z = fit.z_bar;
  row.fit_r = fit.r_bar;
  row.fit_residual = fit.residual;
  return row;
}

std::string snapshot_path(const std::string& dir, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "snapshot_%04zu.txt", index);
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

RunRecord run(const HeightField& h0, double t_end, const StepConfig& cfg,
              const ProbeConfig& probes) {
  cfg.validate();
  if (!(t_end >= 0.0)) throw InvalidArgument("run: t_end must be non-negative");
  if (!(probes.cadence > 0.0)) throw InvalidArgument("run: probe cadence must be positive");
  require_admissible(h0, probes.epsilon);

  RunRecord record(h0);
  const double clearance_floor = std::max(1.0 / probes.norm_bound, probes.epsilon);
  const double time_eps = 1e-12 * std::max(1.0, t_end);

  std::vector<double> snap_times = probes.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;
  auto write_due_snapshots = [&](const HeightField& h, double t) {
    while (next_snap < snap_times.size() && snap_times[next_snap] <= t + time_eps) {
      if (!probes.snapshot_dir.empty()) {
        const std::string path = snapshot_path(probes.snapshot_dir, record.snapshots.size());
        write_snapshot(path, h);
        record.snapshots.emplace_back(t, path);
      }
      ++next_snap;
    }
  };

  HeightField h = h0;
  double t = 0.0;
  StepConfig live = cfg;
  int calm = 0;
  int last_iters = 0;
  const double volume0 = enclosed_volume(h);
  double area_prev = surface_area(h);
  record.max_area_increase = -std::numeric_limits<double>::infinity();

  auto stop = [&](Termination why, std::string diagnosis) {
    record.termination = why;
    record.diagnosis = std::move(diagnosis) + " at t = " + std::to_string(t);
  };

  record.rows.push_back(probe_row(h, t, live.dt, 0, probes));
  write_due_snapshots(h, t);
  std::size_t probe_index = 1;

  auto monitors_ok = [&] {
    if (axis_clearance(h) < clearance_floor) {
      stop(Termination::axis_contact,
           "min(r + h) = " + std::to_string(axis_clearance(h)) + " below 1/M");
      return false;
    }
    const double norm = holder_norm(h, 1, probes.alpha, probes.holder).value;
    if (norm > probes.norm_bound) {
      stop(Termination::norm_bound, "N_{1+alpha}(h) = " + std::to_string(norm) + " exceeds M");
      return false;
    }
    return true;
  };
  bool alive = monitors_ok();

  while (alive && t < t_end - time_eps) {
    const double next_probe = std::min(t_end, probe_index * probes.cadence);
    double target = next_probe;
    if (next_snap < snap_times.size()) target = std::min(target, snap_times[next_snap]);
    StepConfig attempt = live;
    attempt.dt = std::min(live.dt, target - t);
    // Clipped steps may drop below dt_min; the controller still owns live.dt.
    attempt.dt_min = std::min(attempt.dt_min, attempt.dt);

    StepResult res{h, {}};
    try {
      res = step(h, attempt, probes.epsilon);
    } catch (const AdmissibilityError& e) {
      stop(Termination::axis_contact, e.what());
      break;
    } catch (const ConvergenceError& e) {
      res.stats.accepted = false;
      res.stats.contraction_estimate = 1.0;
    } catch (const NumericalError& e) {
      stop(Termination::non_contraction, e.what());
      break;
    }

    try {
      StepConfig rule = live;
      live.dt = adapt_dt(res.stats, rule, calm);
    } catch (const ConvergenceError& e) {
      stop(Termination::non_contraction, e.what());
      break;
    }
    if (!res.stats.accepted) {
      ++record.rejected_steps;
      continue;
    }

    h = std::move(res.h);
    t += attempt.dt;
    if (std::abs(t - target) <= time_eps) t = target;
    ++record.steps;
    last_iters = res.stats.inner_iterations;

    const double area = surface_area(h);
    record.max_area_increase = std::max(record.max_area_increase, (area - area_prev) / area_prev);
    area_prev = area;
    record.max_volume_drift =
        std::max(record.max_volume_drift, std::abs(enclosed_volume(h) - volume0) / volume0);

    if (axis_clearance(h) < clearance_floor) {
      stop(Termination::axis_contact,
           "min(r + h) = " + std::to_string(axis_clearance(h)) + " below 1/M");
      break;
    }
    write_due_snapshots(h, t);
    if (t >= next_probe - time_eps) {
      record.rows.push_back(probe_row(h, t, attempt.dt, last_iters, probes));
      ++probe_index;
      if (!monitors_ok()) break;
    }
  }
  if (record.steps == 0) record.max_area_increase = 0.0;
  record.t_final = t;
  record.final_state = h;
  return record;
}

void write_csv(std::ostream& out, const RunRecord& record) {
  out << "t,dt,inner_iters,norm_1a,norm_3a,volume,area,fit_y,fit_z,fit_r,fit_residual\n";
  char buf[512];
  for (const RunRow& r : record.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.t, r.dt, r.inner_iters, r.norm_1a, r.norm_3a, r.volume, r.area, r.fit_y,
                  r.fit_z, r.fit_r, r.fit_residual);
    out << buf;
  }
}

std::vector<RunRow> read_run_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "t,dt,inner_iters,norm_1a,norm_3a,volume,area,fit_y,fit_z,fit_r,fit_residual") {
    throw Error("run csv: unexpected header");
  }
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    RunRow r;
    const int n = std::sscanf(line.c_str(), "%lf,%lf,%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.t,
                              &r.dt, &r.inner_iters, &r.norm_1a, &r.norm_3a, &r.volume, &r.area,
                              &r.fit_y, &r.fit_z, &r.fit_r, &r.fit_residual);
    if (n != 11) throw Error("run csv: malformed row '" + line + "'");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace sdflow
