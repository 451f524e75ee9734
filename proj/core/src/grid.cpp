#include "sdflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdflow/errors.hpp"

namespace sdflow {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int n_x, int n_theta, double r, double L_x)
    : n_x_(n_x), n_theta_(n_theta), r_(r), L_x_(L_x) {
  if (n_x < 8 || !power_of_two(n_x)) {
    throw InvalidArgument("n_x must be a power of two >= 8, got " + std::to_string(n_x));
  }
  if (n_theta != 1 && (n_theta < 8 || !power_of_two(n_theta))) {
    throw InvalidArgument("n_theta must be 1 or a power of two >= 8, got " +
                          std::to_string(n_theta));
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("radius must be positive");
  if (!(L_x > 0.0) || !std::isfinite(L_x)) throw InvalidArgument("axial period must be positive");
}

bool Grid::same_shape(const Grid& other) const noexcept { return *this == other; }

Field::Field(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) +
                          " values, grid expects " + std::to_string(grid_.size()));
  }
}

Field Field::sample(const Grid& grid, const std::function<double(double, double)>& f) {
  Field out(grid);
  for (int i = 0; i < grid.n_x(); ++i) {
    for (int j = 0; j < grid.n_theta(); ++j) out(i, j) = f(grid.x(i), grid.theta(j));
  }
  return out;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(size());
}

double Field::rms() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s / static_cast<double>(size()));
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void Field::require_same_grid(const Field& other) const {
  if (!grid_.same_shape(other.grid_)) throw InvalidArgument("field grid mismatch");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field& Field::operator*=(const Field& other) {
  require_same_grid(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= other.values_[k];
  return *this;
}

Field Field::shifted(int di, int dj) const {
  Field out(grid_);
  const int nx = grid_.n_x();
  const int nt = grid_.n_theta();
  for (int i = 0; i < nx; ++i) {
    const int si = ((i + di) % nx + nx) % nx;
    for (int j = 0; j < nt; ++j) {
      const int sj = ((j + dj) % nt + nt) % nt;
      out(i, j) = (*this)(si, sj);
    }
  }
  return out;
}

double axis_clearance(const HeightField& h) { return h.grid().r() + h.min(); }

void require_admissible(const HeightField& h, double epsilon) {
  const double clearance = axis_clearance(h);
  if (!(clearance > epsilon)) {
    throw AdmissibilityError("height field is not admissible: min(r + h) = " +
                                 std::to_string(clearance) + " <= epsilon = " +
                                 std::to_string(epsilon),
                             clearance);
  }
}

double integrate(const Field& f, const Field& weight) {
  if (!f.grid().same_shape(weight.grid())) throw InvalidArgument("integrate: shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * weight[k];
  const Grid& g = f.grid();
  const double cell = g.axisymmetric() ? g.dx() : g.dx() * g.dtheta();
  return s * cell;
}

double integrate(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  const Grid& g = f.grid();
  const double cell = g.axisymmetric() ? g.dx() : g.dx() * g.dtheta();
  return s * cell;
}

}  // namespace sdflow
