// Quasilinear split of the surface diffusion operator,
//   G(h) = -A(h) h + F1(h, dh) + F2(h, dh, d2h, d3h),
// with A(h) = (1/g^2) (a11 d_x^2 + 2 a12 d_x d_t + a22 d_t^2)^2.

#include <cmath>

#include "sdflow/errors.hpp"
#include "sdflow/geometry.hpp"
#include "sdflow/spectral.hpp"

namespace sdflow {

namespace {

// Axisymmetric closed forms (rho = r + h, q = 1 + h_x^2):
//   A  = q^-2 d_x^4,  F1 = h_x^2 / (rho^3 q),
//   F2 = -2 h_x / (rho q^2) h_xxx + 10 h_x / q^3 h_xx h_xxx
//        + (h_x^2 - 1) / (rho^2 q^2) h_xx + (6 h_x^2 - 1) / (rho q^3) h_xx^2
//        + (3 - 15 h_x^2) / q^4 h_xx^3.
void lower_order_axisymmetric(const Jet& j, double r, double& f1, double& f2) {
  const double rho = r + j.h0;
  const double p2 = j.hx * j.hx;
  const double q = 1.0 + p2;
  const double q2 = q * q;
  const double q3 = q2 * q;
  const double hxx = j.hxx;
  f1 = p2 / (rho * rho * rho * q);
  f2 = -2.0 * j.hx / (rho * q2) * j.hxxx + 10.0 * j.hx / q3 * hxx * j.hxxx +
       (p2 - 1.0) / (rho * rho * q2) * hxx + (6.0 * p2 - 1.0) / (rho * q3) * hxx * hxx +
       (3.0 - 15.0 * p2) / (q2 * q2) * hxx * hxx * hxx;
}

void lower_order_full(const Jet& j, double r, double& f1, double& f2) {
#include "split_kernel_2d.inc"
}

}  // namespace

std::array<double, 5> principal_coefficients_at(const Jet& j, double r) {
  const double rho = r + j.h0;
  const double a11 = rho * rho + j.ht * j.ht;
  const double a12 = -j.hx * j.ht;
  const double a22 = 1.0 + j.hx * j.hx;
  const double det = rho * rho * a22 + j.ht * j.ht;
  const double inv = 1.0 / (det * det);
  return {a11 * a11 * inv, 4.0 * a11 * a12 * inv, (2.0 * a11 * a22 + 4.0 * a12 * a12) * inv,
          4.0 * a12 * a22 * inv, a22 * a22 * inv};
}

PointSplit split_at(const Jet& j, double r, bool axisymmetric) {
  PointSplit s;
  s.b = principal_coefficients_at(j, r);
  if (axisymmetric) {
    lower_order_axisymmetric(j, r, s.f1, s.f2);
  } else {
    lower_order_full(j, r, s.f1, s.f2);
  }
  return s;
}

double PointSplit::reconstruct(const Jet& j) const {
  double principal = 0.0;
  for (std::size_t e = 0; e < kPrincipalIndices.size(); ++e) {
    principal += b[e] * j.at(kPrincipalIndices[e][0], kPrincipalIndices[e][1]);
  }
  return -principal + f1 + f2;
}

QuasilinearSplit quasilinear_split(const HeightField& h, double epsilon) {
  require_admissible(h, epsilon);
  const Grid& g = h.grid();
  const bool axisym = g.axisymmetric();
  const JetField jets(h, 3);
  QuasilinearSplit out{{Field(g), Field(g), Field(g), Field(g), Field(g)}, Field(g), Field(g)};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const PointSplit s = split_at(jets.at(p), g.r(), axisym);
    for (std::size_t e = 0; e < 5; ++e) out.b[e][p] = s.b[e];
    out.f1[p] = s.f1;
    out.f2[p] = s.f2;
  }
  if (!out.f1.all_finite() || !out.f2.all_finite()) {
    throw NumericalError("non-finite values in quasilinear split");
  }
  return out;
}

Field QuasilinearSplit::apply_principal(const Field& w) const {
  const Grid& g = w.grid();
  if (!g.same_shape(f1.grid())) throw InvalidArgument("apply_principal: grid mismatch");
  const Spectrum ws(w);
  Field out(g);
  const std::size_t terms = g.axisymmetric() ? 1 : kPrincipalIndices.size();
  for (std::size_t e = 0; e < terms; ++e) {
    Field d = ws.derivative(kPrincipalIndices[e][0], kPrincipalIndices[e][1]);
    d *= b[e];
    out += d;
  }
  return out;
}

Field QuasilinearSplit::reconstruct(const HeightField& h) const {
  Field out = f1 + f2;
  out -= apply_principal(h);
  return out;
}

namespace {

Jet jet_at_point(const HeightField& h, int i, int j) {
  const Grid& g = h.grid();
  if (i < 0 || i >= g.n_x() || j < 0 || j >= g.n_theta()) {
    throw InvalidArgument("grid point out of range");
  }
  const JetField jets(h, 1);
  return jets.at(g.index(i, j));
}

}  // namespace

double principal_symbol(const HeightField& h, int i, int j, std::array<double, 2> xi) {
  require_admissible(h);
  const std::array<double, 5> b = principal_coefficients_at(jet_at_point(h, i, j), h.grid().r());
  double symbol = 0.0;
  for (std::size_t e = 0; e < 5; ++e) {
    symbol += b[e] * std::pow(xi[0], kPrincipalIndices[e][0]) *
              std::pow(xi[1], kPrincipalIndices[e][1]);
  }
  return symbol;
}

double ellipticity_bound(const HeightField& h, int i, int j, std::array<double, 2> xi) {
  require_admissible(h);
  const Jet jet = jet_at_point(h, i, j);
  const double rho = h.grid().r() + jet.h0;
  const double det = fundamental_det_at(jet, h.grid().r());
  const double q = rho * rho * xi[0] * xi[0] + xi[1] * xi[1];
  return q * q / (det * det);
}

}  // namespace sdflow
