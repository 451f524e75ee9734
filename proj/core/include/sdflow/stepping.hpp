#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "sdflow/geometry.hpp"
#include "sdflow/grid.hpp"
#include "sdflow/holder.hpp"

namespace sdflow {

/// Fourth-order operator sum b_eta d^eta with coefficients frozen at a height field.
class FrozenOperator {
 public:
  explicit FrozenOperator(const HeightField& h);
  FrozenOperator(const Grid& grid, std::array<Field, 5> coefficients);

  const Grid& grid() const noexcept { return grid_; }
  const std::array<Field, 5>& coefficients() const noexcept { return b_; }
  Field apply(const Field& w) const;
  /// Smallest c with symbol(p, xi) <= c (xi_1^2 + xi_2^2 / r^2)^2 everywhere;
  /// max b_(4,0) on axisymmetric grids.
  double c_max() const noexcept { return c_max_; }
  /// Applies (1 + dt c_max |xi|^4)^-1 in Fourier space.
  Field precondition(const Field& v, double dt) const;

 private:
  void compute_c_max();

  Grid grid_;
  std::array<Field, 5> b_;
  double c_max_ = 0.0;
};

struct InnerSolveOptions {
  double tol = 1e-10;
  int max_iterations = 300;
  int restart = 40;
};

struct InnerSolveResult {
  Field w;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (I + dt A) w = rhs by right-preconditioned restarted GMRES.
/// Throws ConvergenceError when the residual does not drop below
/// tol * |rhs| within max_iterations.
InnerSolveResult inner_solve_detailed(const FrozenOperator& op, const Field& rhs, double dt,
                                      const InnerSolveOptions& options = {});
Field inner_solve(const FrozenOperator& op, const Field& rhs, double dt,
                  const InnerSolveOptions& options = {});

struct StepConfig {
  double dt = 1e-3;
  double inner_tol = 1e-10;
  int inner_max = 40;
  double dt_min = 1e-12;
  double dt_max = 1e-2;
  /// Scales the default initial step.
  double safety = 1.0;

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;
};

struct StepStats {
  int inner_iterations = 0;
  /// Largest ratio of successive fixed-point increments (0 with one sweep).
  double contraction_estimate = 0.0;
  bool accepted = false;
  double dt_used = 0.0;
  /// Sup norm of the final fixed-point increment.
  double last_increment = 0.0;
};

struct StepResult {
  HeightField h;
  StepStats stats;
};

/// One linearly implicit step. With A_n frozen at h^n, iterates
///   (I + dt A_n) w = h^n + dt [(A_n - A(v)) v + F1(v) + F2(v)]
/// in v (starting from h^n) until the increment falls below
/// inner_tol * max(|w|_inf, 1e-6 r). The bracket equals A_n v + G(v); G is
/// evaluated in divergence form and 2/3-dealiased. A step that fails to
/// converge within inner_max sweeps, or whose increments stop shrinking, is
/// returned unaccepted with h unchanged. Throws AdmissibilityError if an
/// iterate leaves the admissible set.
StepResult step(const HeightField& h, const StepConfig& cfg, double epsilon = 0.0);

/// Step-size rule: halve when the contraction estimate exceeds 1/2 or the
/// step was rejected (never below dt_min), grow by 1.25 after five
/// consecutive accepted steps with estimate below 0.1 (never above dt_max).
/// calm_streak carries the consecutive count between calls. Throws
/// ConvergenceError when dt is already dt_min and the step did not contract.
double adapt_dt(const StepStats& stats, const StepConfig& cfg, int& calm_streak);

/// 0.25 dx^4 (1 + max h_x^2)^2 scaled by cfg.safety and clamped to [dt_min, dt_max].
double initial_dt(const HeightField& h, const StepConfig& cfg);

enum class Termination { completed, axis_contact, norm_bound, non_contraction };
std::string to_string(Termination t);

struct ProbeConfig {
  /// Time between recorded rows.
  double cadence = 0.1;
  double alpha = 0.5;
  /// Global-existence monitor bound M: stop if min(r + h) < 1/M or
  /// N_{1+alpha}(h) > M.
  double norm_bound = 100.0;
  double epsilon = 0.0;
  /// Snapshot times; files go to snapshot_dir when it is non-empty.
  std::vector<double> snapshot_times;
  std::string snapshot_dir;
  HolderOptions holder;
};

struct RunRow {
  double t = 0.0;
  double dt = 0.0;
  int inner_iters = 0;
  double norm_1a = 0.0;  // N_{1+alpha}(h - h_fit)
  double norm_3a = 0.0;  // N_{3+alpha}(h - h_fit)
  double volume = 0.0;
  double area = 0.0;
  double fit_y = 0.0;
  double fit_z = 0.0;
  double fit_r = 0.0;
  double fit_residual = 0.0;
};

struct RunRecord {
  std::vector<RunRow> rows;
  Termination termination = Termination::completed;
  std::string diagnosis;
  double t_final = 0.0;
  int steps = 0;
  int rejected_steps = 0;
  /// Largest per-step relative area increase (negative when area always fell).
  double max_area_increase = 0.0;
  /// Largest |V(t) - V(0)| / V(0) over all steps.
  double max_volume_drift = 0.0;
  std::vector<std::pair<double, std::string>> snapshots;
  HeightField final_state;

  explicit RunRecord(const HeightField& h0) : final_state(h0) {}
};

/// Advances h0 to t_end or to the first monitor violation. cfg.dt is the
/// starting step; steps are clipped to land on probe times.
RunRecord run(const HeightField& h0, double t_end, const StepConfig& cfg,
              const ProbeConfig& probes);

/// CSV header and rows: t,dt,inner_iters,norm_1a,norm_3a,volume,area,
/// fit_y,fit_z,fit_r,fit_residual.
void write_csv(std::ostream& out, const RunRecord& record);
std::vector<RunRow> read_run_csv(std::istream& in);

}  // namespace sdflow
