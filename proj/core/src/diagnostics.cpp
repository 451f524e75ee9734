#include "sdflow/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sdflow/errors.hpp"
#include "sdflow/geometry.hpp"
#include "sdflow/linearization.hpp"

namespace sdflow {

namespace {

// Integral over one period cell including the theta direction.
double cell_integral(const Field& f) {
  const double theta_factor = f.grid().axisymmetric() ? 2.0 * std::numbers::pi : 1.0;
  return integrate(f) * theta_factor;
}

}  // namespace

double enclosed_volume(const HeightField& h) {
  require_admissible(h);
  Field integrand(h.grid());
  const double r = h.grid().r();
  for (std::size_t p = 0; p < h.size(); ++p) integrand[p] = 0.5 * (r + h[p]) * (r + h[p]);
  return cell_integral(integrand);
}

double surface_area(const HeightField& h) {
  return cell_integral(surface_geometry(h).area_element);
}

CylinderFit fit_cylinder(const HeightField& h) {
  require_admissible(h);
  const Grid& g = h.grid();
  const double r = g.r();
  CylinderFit fit;
  if (g.axisymmetric()) {
    double mean = 0.0;
    for (double v : h.values()) mean += r + v;
    mean /= static_cast<double>(h.size());
    double ss = 0.0;
    for (double v : h.values()) ss += (r + v - mean) * (r + v - mean);
    fit.r_bar = mean;
    fit.residual = std::sqrt(ss / static_cast<double>(h.size()));
    return fit;
  }

  std::vector<double> ys(g.size()), zs(g.size());
  double mean = 0.0;
  for (int i = 0; i < g.n_x(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      const double rho = r + h(i, j);
      ys[g.index(i, j)] = rho * std::cos(g.theta(j));
      zs[g.index(i, j)] = rho * std::sin(g.theta(j));
      mean += rho;
    }
  }
  Eigen::Vector3d params(0.0, 0.0, mean / static_cast<double>(g.size()));
  constexpr int kMaxIterations = 50;
  fit.converged = false;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double dy = ys[p] - params[0];
      const double dz = zs[p] - params[1];
      const double dist = std::hypot(dy, dz);
      const double res = dist - params[2];
      const Eigen::Vector3d jac(-dy / dist, -dz / dist, -1.0);
      normal += jac * jac.transpose();
      grad += jac * res;
    }
    const Eigen::Vector3d step = normal.ldlt().solve(-grad);
    params += step;
    fit.iterations = it;
    if (step.norm() <= 1e-15 * (1.0 + params.norm())) {
      fit.converged = true;
      break;
    }
  }
  double ss = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double res = std::hypot(ys[p] - params[0], zs[p] - params[1]) - params[2];
    ss += res * res;
  }
  fit.y_bar = params[0];
  fit.z_bar = params[1];
  fit.r_bar = params[2];
  fit.residual = std::sqrt(ss / static_cast<double>(g.size()));
  return fit;
}

HeightField cylinder_height(const Grid& grid, double y_bar, double z_bar, double r_bar) {
  if (std::hypot(y_bar, z_bar) >= r_bar) {
    throw InvalidArgument("cylinder_height: reference axis outside the target cylinder");
  }
  return Field::sample(grid, [&](double, double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double cross = y_bar * s - z_bar * c;
    return y_bar * c + z_bar * s + std::sqrt(r_bar * r_bar - cross * cross) - grid.r();
  });
}

RateEstimate estimate_rate(const TimeSeries& series, RateWindow window) {
  double st = 0.0, sy = 0.0;
  int n = 0;
  for (const auto& [t, v] : series) {
    if (t < window.t_begin || t > window.t_end) continue;
    if (!(v > 0.0)) throw InvalidArgument("estimate_rate: non-positive value in window");
    st += t;
    sy += std::log(v);
    ++n;
  }
  if (n < 10) throw InvalidArgument("estimate_rate: fewer than 10 samples in window");
  const double tm = st / n;
  const double ym = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (const auto& [t, v] : series) {
    if (t < window.t_begin || t > window.t_end) continue;
    const double dt = t - tm;
    const double dy = std::log(v) - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  RateEstimate est;
  est.window = window;
  est.samples = n;
  est.rate = sty / stt;
  const double ss_res = std::max(0.0, syy - est.rate * sty);
  // A series with no spread in log(value) is fitted exactly.
  est.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return est;
}

double transient_end(const Grid& grid) {
  const double r = grid.r();
  const int k_max = grid.n_x() / 3;
  const int m_max = grid.axisymmetric() ? 0 : grid.n_theta() / 3;
  double lead = -std::numeric_limits<double>::infinity();
  double next = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max; ++k) {
    for (int m = 0; m <= m_max; ++m) {
      if (k == 0 && m <= 1) continue;  // tangent to the cylinder family
      const double lambda = dispersion(k, m, r);
      if (lambda > lead) {
        next = lead;
        lead = lambda;
      } else if (lambda > next) {
        next = lambda;
      }
    }
  }
  if (!std::isfinite(next) || lead == next) return 0.0;
  return std::log(1e3) / (lead - next);
}

DualNorms dual_norm_monitor(const HeightField& h, double alpha, const HolderOptions& options) {
  const CylinderFit fit = fit_cylinder(h);
  const Field distance = h - cylinder_height(h.grid(), fit.y_bar, fit.z_bar, fit.r_bar);
  return {holder_norm(distance, 1, alpha, options).value,
          holder_norm(distance, 3, alpha, options).value};
}

}  // namespace sdflow
