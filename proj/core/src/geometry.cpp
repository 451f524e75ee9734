#include "sdflow/geometry.hpp"

#include <cmath>

#include "sdflow/errors.hpp"
#include "sdflow/spectral.hpp"

namespace sdflow {

namespace {

constexpr int jet_index(int ox, int ot) {
  const int order = ox + ot;
  return order * (order + 1) / 2 + ot;
}

constexpr std::array<double Jet::*, 15> kJetMembers{
    &Jet::h0,   &Jet::hx,    &Jet::ht,    &Jet::hxx,   &Jet::hxt,
    &Jet::htt,  &Jet::hxxx,  &Jet::hxxt,  &Jet::hxtt,  &Jet::httt,
    &Jet::hxxxx, &Jet::hxxxt, &Jet::hxxtt, &Jet::hxttt, &Jet::htttt};

void check_order(int ox, int ot) {
  if (ox < 0 || ot < 0 || ox + ot > 4) throw InvalidArgument("jet index out of range");
}

void require_finite(const Field& f, const char* what) {
  if (!f.all_finite()) throw NumericalError(std::string("non-finite values in ") + what);
}

}  // namespace

double& Jet::at(int ox, int ot) {
  check_order(ox, ot);
  return this->*kJetMembers[jet_index(ox, ot)];
}

double Jet::at(int ox, int ot) const {
  check_order(ox, ot);
  return this->*kJetMembers[jet_index(ox, ot)];
}

JetField::JetField(const HeightField& h, int max_order)
    : grid_(h.grid()),
      max_order_(max_order),
      d_{Field(h.grid()), Field(h.grid()), Field(h.grid()), Field(h.grid()), Field(h.grid()),
         Field(h.grid()), Field(h.grid()), Field(h.grid()), Field(h.grid()), Field(h.grid()),
         Field(h.grid()), Field(h.grid()), Field(h.grid()), Field(h.grid()), Field(h.grid())} {
  if (max_order < 0 || max_order > 4) throw InvalidArgument("jet order must lie in 0..4");
  const Spectrum spectrum(h);
  d_[0] = h;
  for (int order = 1; order <= max_order; ++order) {
    for (int ot = 0; ot <= order; ++ot) {
      if (ot > 0 && grid_.axisymmetric()) continue;  // stays zero
      d_[jet_index(order - ot, ot)] = spectrum.derivative(order - ot, ot);
    }
  }
}

const Field& JetField::derivative(int ox, int ot) const {
  check_order(ox, ot);
  if (ox + ot > max_order_) throw InvalidArgument("jet derivative above computed order");
  return d_[jet_index(ox, ot)];
}

Jet JetField::at(std::size_t point) const {
  Jet j;
  for (int idx = 0; idx < 15; ++idx) j.*kJetMembers[idx] = d_[idx][point];
  return j;
}

double fundamental_det_at(const Jet& j, double r) {
  const double rho = r + j.h0;
  return rho * rho * (1.0 + j.hx * j.hx) + j.ht * j.ht;
}

double mean_curvature_at(const Jet& j, double r) {
  // Embedding X = (x, rho cos t, rho sin t), outward normal, H = g^{ij} L_ij.
  const double rho = r + j.h0;
  const double det = fundamental_det_at(j, r);
  const double a11 = rho * rho + j.ht * j.ht;
  const double a22 = 1.0 + j.hx * j.hx;
  const double numer = -a11 * rho * j.hxx + 2.0 * j.hx * j.ht * (rho * j.hxt - j.hx * j.ht) +
                       a22 * (rho * rho + 2.0 * j.ht * j.ht - rho * j.htt);
  return numer / (det * std::sqrt(det));
}

SurfaceGeometry surface_geometry(const HeightField& h, double epsilon) {
  require_admissible(h, epsilon);
  const JetField jets(h, 2);
  const Grid& g = h.grid();
  SurfaceGeometry geo{Field(g), Field(g), Field(g)};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Jet j = jets.at(p);
    const double det = fundamental_det_at(j, g.r());
    geo.fundamental_det[p] = det;
    geo.area_element[p] = std::sqrt(det);
    geo.mean_curvature[p] = mean_curvature_at(j, g.r());
  }
  require_finite(geo.mean_curvature, "mean curvature");
  return geo;
}

Field mean_curvature(const HeightField& h, double epsilon) {
  return surface_geometry(h, epsilon).mean_curvature;
}

namespace {

Field sd_operator_axisymmetric(const HeightField& h) {
  const Grid& g = h.grid();
  const double r = g.r();
  const Spectrum hs(h);
  const Field hx = hs.derivative(1, 0);
  const Field hxx = hs.derivative(2, 0);

  Field curv(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double rho = r + h[p];
    const double q = 1.0 + hx[p] * hx[p];
    curv[p] = 1.0 / (rho * std::sqrt(q)) - hxx[p] / (q * std::sqrt(q));
  }
  const Field curv_x = Spectrum(curv).derivative(1, 0);

  Field flux(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    flux[p] = (r + h[p]) / std::sqrt(1.0 + hx[p] * hx[p]) * curv_x[p];
  }
  Field out = Spectrum(flux).derivative(1, 0);
  for (std::size_t p = 0; p < g.size(); ++p) out[p] /= r + h[p];
  return out;
}

Field sd_operator_full(const HeightField& h) {
  const Grid& g = h.grid();
  const double r = g.r();
  const JetField jets(h, 2);

  Field curv(g);
  for (std::size_t p = 0; p < g.size(); ++p) curv[p] = mean_curvature_at(jets.at(p), r);
  const Spectrum cs(curv);
  const Field curv_x = cs.derivative(1, 0);
  const Field curv_t = cs.derivative(0, 1);

  const Field& hx = jets.derivative(1, 0);
  const Field& ht = jets.derivative(0, 1);
  Field flux_x(g), flux_t(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double rho = r + h[p];
    const double a11 = rho * rho + ht[p] * ht[p];
    const double a12 = -hx[p] * ht[p];
    const double a22 = 1.0 + hx[p] * hx[p];
    const double sqg = std::sqrt(rho * rho * a22 + ht[p] * ht[p]);
    flux_x[p] = (a11 * curv_x[p] + a12 * curv_t[p]) / sqg;
    flux_t[p] = (a12 * curv_x[p] + a22 * curv_t[p]) / sqg;
  }
  Field out = Spectrum(flux_x).derivative(1, 0);
  out += Spectrum(flux_t).derivative(0, 1);
  for (std::size_t p = 0; p < g.size(); ++p) out[p] /= r + h[p];
  return out;
}

}  // namespace

Field sd_operator(const HeightField& h, double epsilon) {
  require_admissible(h, epsilon);
  if (!h.all_finite()) throw NumericalError("non-finite height field");
  Field out = h.grid().axisymmetric() ? sd_operator_axisymmetric(h) : sd_operator_full(h);
  require_finite(out, "G(h)");
  return out;
}

}  // namespace sdflow
