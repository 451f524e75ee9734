#include "sdflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "sdflow/errors.hpp"

namespace sdflow {

namespace detail {

// FFTW plans for one grid shape. Planning is not thread-safe in FFTW, so
// plans are created under a global lock and then only executed through the
// new-array interface, which is.
struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  std::size_t n_real = 0;
  std::size_t n_complex = 0;
  std::shared_ptr<const std::vector<int>> kx;
  std::shared_ptr<const std::vector<int>> mt;

  FftPlans() = default;
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const FftPlans> make_plans(int n_x, int n_theta) {
  auto plans = std::make_shared<FftPlans>();
  const bool axisym = n_theta == 1;
  plans->n_real = static_cast<std::size_t>(n_x) * n_theta;
  plans->n_complex = axisym ? static_cast<std::size_t>(n_x / 2 + 1)
                            : static_cast<std::size_t>(n_x) * (n_theta / 2 + 1);

  double* in = fftw_alloc_real(plans->n_real);
  fftw_complex* out = fftw_alloc_complex(plans->n_complex);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (axisym) {
    plans->forward = fftw_plan_dft_r2c_1d(n_x, in, out, flags);
    plans->inverse = fftw_plan_dft_c2r_1d(n_x, out, in, flags | FFTW_DESTROY_INPUT);
  } else {
    plans->forward = fftw_plan_dft_r2c_2d(n_x, n_theta, in, out, flags);
    plans->inverse = fftw_plan_dft_c2r_2d(n_x, n_theta, out, in, flags | FFTW_DESTROY_INPUT);
  }
  fftw_free(in);
  fftw_free(out);
  if (!plans->forward || !plans->inverse) throw Error("FFTW planning failed");

  auto kx = std::make_shared<std::vector<int>>(plans->n_complex);
  auto mt = std::make_shared<std::vector<int>>(plans->n_complex);
  if (axisym) {
    for (int k = 0; k <= n_x / 2; ++k) (*kx)[k] = k;
  } else {
    const int nc = n_theta / 2 + 1;
    for (int i = 0; i < n_x; ++i) {
      const int k = i <= n_x / 2 ? i : i - n_x;
      for (int m = 0; m < nc; ++m) {
        (*kx)[static_cast<std::size_t>(i) * nc + m] = k;
        (*mt)[static_cast<std::size_t>(i) * nc + m] = m;
      }
    }
  }
  plans->kx = std::move(kx);
  plans->mt = std::move(mt);
  return plans;
}

std::shared_ptr<const FftPlans> plans_for(const Grid& grid) {
  static std::map<std::pair<int, int>, std::shared_ptr<const FftPlans>> cache;
  std::lock_guard lock(plan_mutex());
  auto key = std::make_pair(grid.n_x(), grid.n_theta());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto plans = make_plans(grid.n_x(), grid.n_theta());
  cache.emplace(key, plans);
  return plans;
}

}  // namespace
}  // namespace detail

Spectrum::Spectrum(const Grid& grid) : grid_(grid), plans_(detail::plans_for(grid)) {
  coeffs_.assign(plans_->n_complex, {0.0, 0.0});
  init_modes();
}

Spectrum::Spectrum(const Field& f) : Spectrum(f.grid()) {
  // r2c does not modify its input, but the interface is non-const.
  std::vector<double> in(f.values().begin(), f.values().end());
  fftw_execute_dft_r2c(plans_->forward, in.data(),
                       reinterpret_cast<fftw_complex*>(coeffs_.data()));
}

void Spectrum::init_modes() {
  kx_table_ = plans_->kx;
  mt_table_ = plans_->mt;
  kx_ = kx_table_->data();
  mt_ = mt_table_->data();
}

std::complex<double> Spectrum::derivative_factor(std::size_t s, int order_x,
                                                 int order_theta) const {
  const int k = kx_[s];
  const int m = mt_[s];
  const bool nyquist_x = std::abs(k) * 2 == grid_.n_x();
  const bool nyquist_t = !grid_.axisymmetric() && m * 2 == grid_.n_theta();
  if ((order_x % 2 == 1 && nyquist_x) || (order_theta % 2 == 1 && nyquist_t)) return 0.0;
  std::complex<double> factor = 1.0;
  const std::complex<double> ikx(0.0, k * grid_.axial_scale());
  const std::complex<double> imt(0.0, static_cast<double>(m));
  for (int a = 0; a < order_x; ++a) factor *= ikx;
  for (int a = 0; a < order_theta; ++a) factor *= imt;
  return factor;
}

Field Spectrum::derivative(int order_x, int order_theta) const {
  if (order_x < 0 || order_theta < 0 || order_x + order_theta > 4) {
    throw InvalidArgument("derivative order out of range: (" + std::to_string(order_x) + ", " +
                          std::to_string(order_theta) + ")");
  }
  if (order_theta > 0 && grid_.axisymmetric()) return Field(grid_, 0.0);
  std::vector<std::complex<double>> work(coeffs_.size());
  for (std::size_t s = 0; s < coeffs_.size(); ++s) {
    work[s] = coeffs_[s] * derivative_factor(s, order_x, order_theta);
  }
  Field out(grid_);
  fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(work.data()),
                       out.values().data());
  out *= 1.0 / static_cast<double>(grid_.size());
  return out;
}

Field Spectrum::to_field() const { return derivative(0, 0); }

Spectrum& Spectrum::dealias() {
  const int kcut = grid_.n_x() / 3;
  const int mcut = grid_.n_theta() / 3;
  for (std::size_t s = 0; s < coeffs_.size(); ++s) {
    if (std::abs(kx_[s]) > kcut || (!grid_.axisymmetric() && mt_[s] > mcut)) coeffs_[s] = 0.0;
  }
  return *this;
}

Spectrum& Spectrum::operator+=(const Spectrum& other) {
  if (!grid_.same_shape(other.grid_)) throw InvalidArgument("spectrum grid mismatch");
  for (std::size_t s = 0; s < coeffs_.size(); ++s) coeffs_[s] += other.coeffs_[s];
  return *this;
}

DerivativeResult spectral_derivative(const Field& f, int order_x, int order_theta) {
  if (order_x < 0 || order_theta < 0 || order_x + order_theta > 4) {
    throw InvalidArgument("derivative order out of range");
  }
  DerivativeResult result{Spectrum(f).derivative(order_x, order_theta), false};
  result.theta_degenerate = order_theta > 0 && f.grid().axisymmetric();
  return result;
}

Field dealias(const Field& f) { return Spectrum(f).dealias().to_field(); }

std::vector<MultiIndex> multi_indices(int order, bool axisymmetric) {
  if (axisymmetric) return {MultiIndex{order, 0}};
  std::vector<MultiIndex> out;
  for (int ox = order; ox >= 0; --ox) out.push_back({ox, order - ox});
  return out;
}

}  // namespace sdflow
