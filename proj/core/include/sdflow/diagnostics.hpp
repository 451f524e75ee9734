#pragma once

#include <utility>
#include <vector>

#include "sdflow/grid.hpp"
#include "sdflow/holder.hpp"

namespace sdflow {

/// Volume enclosed per axial period: integral of (r+h)^2 / 2 dtheta dx.
double enclosed_volume(const HeightField& h);
/// Area per axial period: integral of sqrt(det g) dx dtheta.
double surface_area(const HeightField& h);

/// Cylinder with axis (., y_bar, z_bar) and radius r_bar fitted to Gamma(h).
struct CylinderFit {
  double y_bar = 0.0;
  double z_bar = 0.0;
  double r_bar = 0.0;
  /// RMS distance of the surface samples to the fitted cylinder.
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Gauss-Newton least squares from (0, 0, mean(r+h)). On an axisymmetric grid
/// the axis is fixed at the origin by symmetry and r_bar = mean(r+h).
CylinderFit fit_cylinder(const HeightField& h);

/// Height over the grid's reference cylinder of the cylinder with axis
/// (y_bar, z_bar) and radius r_bar. Requires the reference axis to lie
/// inside the target cylinder.
HeightField cylinder_height(const Grid& grid, double y_bar, double z_bar, double r_bar);

struct RateWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
};

struct RateEstimate {
  double rate = 0.0;
  double r_squared = 0.0;
  RateWindow window;
  int samples = 0;

  bool reliable() const noexcept { return r_squared >= 0.99; }
};

using TimeSeries = std::vector<std::pair<double, double>>;

/// Least-squares slope of log(value) against t over samples inside the
/// window. Throws InvalidArgument for fewer than 10 samples or non-positive
/// values in the window.
RateEstimate estimate_rate(const TimeSeries& series, RateWindow window);

/// Default window start for exponential-rate fits: the time after which the
/// dominant non-neutral mode leads the next one by a factor 1e3, using the
/// modes representable with the grid's symmetry (m = 0 only when axisymmetric).
double transient_end(const Grid& grid);

struct DualNorms {
  double low = 0.0;   // N_{1+alpha}(h - h_fit)
  double high = 0.0;  // N_{3+alpha}(h - h_fit)
};

/// Hoelder-norm distances of h to the height of its fitted cylinder.
DualNorms dual_norm_monitor(const HeightField& h, double alpha = 0.5,
                            const HolderOptions& options = {});

}  // namespace sdflow
