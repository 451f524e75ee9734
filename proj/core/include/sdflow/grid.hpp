#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace sdflow {

/// Uniform periodic grid on the cylinder of radius r.
///
/// Points are x_i = i * L_x / n_x and theta_j = j * 2 pi / n_theta. An
/// axisymmetric grid has n_theta == 1 and carries no azimuthal resolution.
class Grid {
 public:
  static constexpr double kDefaultPeriod = 2.0 * std::numbers::pi;

  Grid(int n_x, int n_theta, double r, double L_x = kDefaultPeriod);

  static Grid axisymmetric(int n_x, double r, double L_x = kDefaultPeriod) {
    return Grid(n_x, 1, r, L_x);
  }

  int n_x() const noexcept { return n_x_; }
  int n_theta() const noexcept { return n_theta_; }
  double r() const noexcept { return r_; }
  double L_x() const noexcept { return L_x_; }

  bool axisymmetric() const noexcept { return n_theta_ == 1; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_x_) * static_cast<std::size_t>(n_theta_);
  }
  double dx() const noexcept { return L_x_ / n_x_; }
  double dtheta() const noexcept { return 2.0 * std::numbers::pi / n_theta_; }
  double x(int i) const noexcept { return i * dx(); }
  double theta(int j) const noexcept { return axisymmetric() ? 0.0 : j * dtheta(); }
  /// Axial wavenumber scale 2 pi / L_x.
  double axial_scale() const noexcept { return 2.0 * std::numbers::pi / L_x_; }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta_) +
           static_cast<std::size_t>(j);
  }

  /// Same shape, radius and period.
  bool same_shape(const Grid& other) const noexcept;
  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_x_;
  int n_theta_;
  double r_;
  double L_x_;
};

/// Real field sampled on a Grid, stored row-major (x index outermost).
class Field {
 public:
  explicit Field(const Grid& grid, double value = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  /// Samples f(x, theta) at every grid point.
  static Field sample(const Grid& grid, const std::function<double(double, double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double min() const;
  double max() const;
  double max_abs() const;
  double mean() const;
  /// Root-mean-square over grid points.
  double rms() const;
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// Pointwise product.
  Field& operator*=(const Field& other);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }

  /// Cyclic index shift: result(i, j) = f(i + di, j + dj).
  Field shifted(int di, int dj) const;

 private:
  void require_same_grid(const Field& other) const;

  Grid grid_;
  std::vector<double> values_;
};

/// The height function of a surface over the cylinder of radius grid().r().
using HeightField = Field;

/// Throws AdmissibilityError unless min(r + h) > epsilon.
void require_admissible(const HeightField& h, double epsilon = 0.0);
/// min over the grid of r + h.
double axis_clearance(const HeightField& h);

/// Rectangle-rule quadrature of f * weight over one period cell: dx dtheta in
/// full 2D, dx alone on an axisymmetric grid.
double integrate(const Field& f, const Field& weight);
double integrate(const Field& f);

// Snapshot text format: header "SDFLOW1 n_x n_theta r L_x" followed by the
// row-major values one per line, all at 17 significant digits.
void write_snapshot(std::ostream& out, const Field& f);
void write_snapshot(const std::string& path, const Field& f);
Field read_snapshot(std::istream& in);
Field read_snapshot(const std::string& path);

}  // namespace sdflow
