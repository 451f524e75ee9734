#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "sdflow/grid.hpp"

namespace sdflow {

namespace detail {
struct FftPlans;
}

/// Discrete Fourier coefficients of a Field.
///
/// Axisymmetric grids use a half-complex layout over k = 0..n_x/2; full grids
/// use n_x x (n_theta/2 + 1) with the x index outermost. Wavenumbers are
/// integers: the physical axial wavenumber is k * grid.axial_scale().
class Spectrum {
 public:
  explicit Spectrum(const Field& f);
  /// Zero spectrum on the grid.
  explicit Spectrum(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Exact derivative d_x^order_x d_theta^order_theta of the band-limited
  /// interpolant, sampled on the grid. Orders must satisfy
  /// order_x + order_theta <= 4. Odd derivatives annihilate Nyquist modes.
  /// On an axisymmetric grid any theta derivative is identically zero.
  Field derivative(int order_x, int order_theta) const;
  /// Inverse transform.
  Field to_field() const;

  /// Zero every mode with |k| > n_x / 3 or |m| > n_theta / 3.
  Spectrum& dealias();
  /// Multiply mode (k, m) by factor(k, m); k and m are signed integers.
  template <class F>
  Spectrum& apply(F&& factor) {
    for (std::size_t s = 0; s < coeffs_.size(); ++s) coeffs_[s] *= factor(kx_[s], mt_[s]);
    return *this;
  }

  int wavenumber_x(std::size_t s) const noexcept { return kx_[s]; }
  int wavenumber_theta(std::size_t s) const noexcept { return mt_[s]; }
  std::complex<double>& operator[](std::size_t s) noexcept { return coeffs_[s]; }
  std::complex<double> operator[](std::size_t s) const noexcept { return coeffs_[s]; }

  Spectrum& operator+=(const Spectrum& other);

 private:
  void init_modes();
  std::complex<double> derivative_factor(std::size_t s, int order_x, int order_theta) const;

  Grid grid_;
  std::shared_ptr<const detail::FftPlans> plans_;
  std::vector<std::complex<double>> coeffs_;
  // Shared per-shape wavenumber tables.
  std::shared_ptr<const std::vector<int>> kx_table_, mt_table_;
  const int* kx_ = nullptr;
  const int* mt_ = nullptr;
};

struct DerivativeResult {
  Field field;
  /// Set when a theta derivative was requested on an axisymmetric grid.
  bool theta_degenerate = false;
};

/// One-shot spectral derivative. Throws InvalidArgument for orders outside
/// 0 <= order, order_x + order_theta <= 4.
DerivativeResult spectral_derivative(const Field& f, int order_x, int order_theta);

/// 2/3-rule truncation of f.
Field dealias(const Field& f);

/// Derivative multi-index: d_x^ox d_theta^ot.
struct MultiIndex {
  int ox;
  int ot;
  int order() const noexcept { return ox + ot; }
};
/// All multi-indices of exactly the given total order, by decreasing ox. On an
/// axisymmetric grid only (order, 0) is returned.
std::vector<MultiIndex> multi_indices(int order, bool axisymmetric);

}  // namespace sdflow
