#pragma once

#include <array>

#include "sdflow/grid.hpp"

namespace sdflow {

/// Derivatives of h at a point up to fourth order. Field names spell the
/// multi-index: "x"/"t" for one derivative in x/theta.
struct Jet {
  double h0 = 0.0;
  double hx = 0.0, ht = 0.0;
  double hxx = 0.0, hxt = 0.0, htt = 0.0;
  double hxxx = 0.0, hxxt = 0.0, hxtt = 0.0, httt = 0.0;
  double hxxxx = 0.0, hxxxt = 0.0, hxxtt = 0.0, hxttt = 0.0, htttt = 0.0;

  /// Indexed access by (ox, ot) with ox + ot <= 4.
  double& at(int ox, int ot);
  double at(int ox, int ot) const;
};

/// Spectral jets of a height field, shared by the pointwise kernels.
class JetField {
 public:
  JetField(const HeightField& h, int max_order);

  const Grid& grid() const noexcept { return grid_; }
  int max_order() const noexcept { return max_order_; }
  const Field& derivative(int ox, int ot) const;
  Jet at(std::size_t point) const;

 private:
  Grid grid_;
  int max_order_;
  std::array<Field, 15> d_;
};

/// First-fundamental-form data and mean curvature of Gamma(h).
struct SurfaceGeometry {
  Field fundamental_det;  // det g = (r+h)^2 (1 + h_x^2) + h_theta^2
  Field mean_curvature;   // positive on cylinders: 1/(r+h)
  Field area_element;     // sqrt(det g)
};

/// Mean curvature from a 2-jet; convention H = 1/(r+h) on cylinders.
double mean_curvature_at(const Jet& j, double r);
/// det of the first fundamental form from a 1-jet.
double fundamental_det_at(const Jet& j, double r);

/// Throws AdmissibilityError unless min(r + h) > epsilon.
SurfaceGeometry surface_geometry(const HeightField& h, double epsilon = 0.0);
Field mean_curvature(const HeightField& h, double epsilon = 0.0);

/// G(h), the surface diffusion velocity of the height function, evaluated in
/// divergence form with spectral derivatives:
///
///   G = (1/(r+h)) { d_x[(a11 H_x + a12 H_t)/sqrt(g)] + d_t[(a12 H_x + a22 H_t)/sqrt(g)] }
///
/// with a11 = (r+h)^2 + h_t^2, a12 = -h_x h_t, a22 = 1 + h_x^2. Axisymmetric
/// grids evaluate the one-dimensional reduction directly. Throws
/// AdmissibilityError for inadmissible h and NumericalError on non-finite output.
Field sd_operator(const HeightField& h, double epsilon = 0.0);

/// Principal coefficient index: (4,0), (3,1), (2,2), (1,3), (0,4).
constexpr std::array<std::array<int, 2>, 5> kPrincipalIndices{
    {{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}}};

/// Pointwise split of G into -sum b_eta d^eta h + f1 + f2.
struct PointSplit {
  std::array<double, 5> b{};
  double f1 = 0.0;
  double f2 = 0.0;

  /// -sum b_eta d^eta h + f1 + f2 at this jet.
  double reconstruct(const Jet& j) const;
};

/// Principal coefficients of A(h) = (1/g^2) (a11 d_x^2 + 2 a12 d_x d_t + a22 d_t^2)^2.
std::array<double, 5> principal_coefficients_at(const Jet& j, double r);
/// The axisymmetric path uses the closed one-dimensional formulas and ignores
/// theta derivatives; the full path uses the expanded two-dimensional kernel.
PointSplit split_at(const Jet& j, double r, bool axisymmetric);

struct QuasilinearSplit {
  std::array<Field, 5> b;  // ordered as kPrincipalIndices
  Field f1;
  Field f2;

  /// A w = sum b_eta d^eta w with these (frozen) coefficients.
  Field apply_principal(const Field& w) const;
  /// -A h + f1 + f2.
  Field reconstruct(const HeightField& h) const;
};

QuasilinearSplit quasilinear_split(const HeightField& h, double epsilon = 0.0);

/// Principal symbol sum b_eta xi^eta of A(h) at grid point (i, j).
double principal_symbol(const HeightField& h, int i, int j, std::array<double, 2> xi);
/// Lower bound (1/g^2) ((r+h)^2 xi_1^2 + xi_2^2)^2 at grid point (i, j).
double ellipticity_bound(const HeightField& h, int i, int j, std::array<double, 2> xi);

}  // namespace sdflow
