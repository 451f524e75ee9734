#include <algorithm>
#include <cmath>
#include <vector>

#include "sdflow/errors.hpp"
#include "sdflow/spectral.hpp"
#include "sdflow/stepping.hpp"

namespace sdflow {

FrozenOperator::FrozenOperator(const HeightField& h)
    : grid_(h.grid()), b_{Field(h.grid()), Field(h.grid()), Field(h.grid()), Field(h.grid()),
                          Field(h.grid())} {
  require_admissible(h);
  const JetField jets(h, 1);
  for (std::size_t p = 0; p < grid_.size(); ++p) {
    const auto b = principal_coefficients_at(jets.at(p), grid_.r());
    for (std::size_t e = 0; e < 5; ++e) b_[e][p] = b[e];
  }
  compute_c_max();
}

FrozenOperator::FrozenOperator(const Grid& grid, std::array<Field, 5> coefficients)
    : grid_(grid), b_(std::move(coefficients)) {
  for (const Field& f : b_) {
    if (!f.grid().same_shape(grid)) throw InvalidArgument("frozen coefficients: grid mismatch");
  }
  compute_c_max();
}

void FrozenOperator::compute_c_max() {
  double c = 0.0;
  if (grid_.axisymmetric()) {
    for (double v : b_[0].values()) c = std::max(c, v);
  } else {
    // The symbol is (q11 xi1^2 + 2 q12 xi1 xi2 + q22 xi2^2)^2 with q = a / det g,
    // so b = (q11^2, 4 q11 q12, ..., q22^2). In zeta = (xi1, xi2 / r) the form
    // has matrix [[q11, q12 r], [q12 r, q22 r^2]]; its top eigenvalue squared
    // bounds the symbol against |zeta|^4.
    const double r = grid_.r();
    for (std::size_t p = 0; p < grid_.size(); ++p) {
      const double q11 = std::sqrt(b_[0][p]);
      const double q22 = std::sqrt(b_[4][p]);
      const double q12 = q11 > 0.0 ? b_[1][p] / (4.0 * q11) : 0.0;
      const double m11 = q11;
      const double m12 = q12 * r;
      const double m22 = q22 * r * r;
      const double tr = 0.5 * (m11 + m22);
      const double lmax = tr + std::sqrt(0.25 * (m11 - m22) * (m11 - m22) + m12 * m12);
      c = std::max(c, lmax * lmax);
    }
  }
  c_max_ = c;
}

Field FrozenOperator::apply(const Field& w) const {
  if (!w.grid().same_shape(grid_)) throw InvalidArgument("frozen operator: grid mismatch");
  const Spectrum ws(w);
  Field out(grid_);
  const std::size_t terms = grid_.axisymmetric() ? 1 : kPrincipalIndices.size();
  for (std::size_t e = 0; e < terms; ++e) {
    Field d = ws.derivative(kPrincipalIndices[e][0], kPrincipalIndices[e][1]);
    d *= b_[e];
    out += d;
  }
  return out;
}

Field FrozenOperator::precondition(const Field& v, double dt) const {
  const double kscale = grid_.axial_scale();
  const double inv_r2 = 1.0 / (grid_.r() * grid_.r());
  const double c = c_max_;
  Spectrum s(v);
  s.apply([&](int k, int m) {
    const double kk = k * kscale;
    const double xi2 = kk * kk + m * m * inv_r2;
    return 1.0 / (1.0 + dt * c * xi2 * xi2);
  });
  return s.to_field();
}

namespace {

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) s += a[p] * b[p];
  return s;
}

double norm2(const Field& a) { return std::sqrt(dot(a, a)); }

// w <- w + s * v
void axpy(Field& w, double s, const Field& v) {
  for (std::size_t p = 0; p < w.size(); ++p) w[p] += s * v[p];
}

}  // namespace

InnerSolveResult inner_solve_detailed(const FrozenOperator& op, const Field& rhs, double dt,
                                      const InnerSolveOptions& options) {
  const Grid& g = op.grid();
  if (!rhs.grid().same_shape(g)) throw InvalidArgument("inner_solve: grid mismatch");
  if (!(dt > 0.0)) throw InvalidArgument("inner_solve: dt must be positive");
  if (!(op.coefficients()[0].min() > 0.0)) {
    throw InvalidArgument("inner_solve: frozen coefficients must be strictly positive");
  }

  auto apply_system = [&](const Field& w) {
    Field out = op.apply(w);
    out *= dt;
    out += w;
    return out;
  };

  InnerSolveResult result{Field(g), 0, 0.0};
  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) return result;
  const double target = options.tol * rhs_norm;

  Field x = op.precondition(rhs, dt);
  Field residual = rhs - apply_system(x);
  double beta = norm2(residual);
  const int m = options.restart;
  int total = 0;

  while (beta > target && total < options.max_iterations) {
    std::vector<Field> basis;
    basis.reserve(m + 1);
    basis.push_back(residual * (1.0 / beta));
    std::vector<std::vector<double>> hess(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m, 0.0), sn(m, 0.0), gvec(m + 1, 0.0);
    gvec[0] = beta;
    int cols = 0;
    for (int j = 0; j < m && total < options.max_iterations; ++j) {
      Field w = apply_system(op.precondition(basis[j], dt));
      for (int i = 0; i <= j; ++i) {
        hess[i][j] = dot(w, basis[i]);
        axpy(w, -hess[i][j], basis[i]);
      }
      hess[j + 1][j] = norm2(w);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hess[i][j] + sn[i] * hess[i + 1][j];
        hess[i + 1][j] = -sn[i] * hess[i][j] + cs[i] * hess[i + 1][j];
        hess[i][j] = t;
      }
      const double denom = std::hypot(hess[j][j], hess[j + 1][j]);
      cs[j] = hess[j][j] / denom;
      sn[j] = hess[j + 1][j] / denom;
      hess[j][j] = denom;
      hess[j + 1][j] = 0.0;
      gvec[j + 1] = -sn[j] * gvec[j];
      gvec[j] = cs[j] * gvec[j];
      ++cols;
      ++total;
      const double breakdown = hess[j][j] == 0.0 ? 0.0 : std::abs(gvec[j + 1]);
      if (breakdown <= target || denom == 0.0) break;
      basis.push_back(w);
      const double wn = norm2(basis.back());
      if (wn == 0.0) break;
      basis.back() *= 1.0 / wn;
    }
    // Back substitution on the rotated Hessenberg system.
    std::vector<double> y(cols, 0.0);
    for (int i = cols - 1; i >= 0; --i) {
      double s = gvec[i];
      for (int k = i + 1; k < cols; ++k) s -= hess[i][k] * y[k];
      y[i] = s / hess[i][i];
    }
    Field update(g);
    for (int i = 0; i < cols; ++i) axpy(update, y[i], basis[i]);
    x += op.precondition(update, dt);
    residual = rhs - apply_system(x);
    beta = norm2(residual);
  }
  result.iterations = total;
  result.relative_residual = beta / rhs_norm;
  if (beta > target) {
    throw ConvergenceError("inner solve did not converge: relative residual " +
                               std::to_string(result.relative_residual),
                           total);
  }
  result.w = std::move(x);
  return result;
}

Field inner_solve(const FrozenOperator& op, const Field& rhs, double dt,
                  const InnerSolveOptions& options) {
  return inner_solve_detailed(op, rhs, dt, options).w;
}

}  // namespace sdflow
