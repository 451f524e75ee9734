#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdflow {

/// Closed-form growth rate of the Fourier mode exp(i(kx + m theta)) under the
/// linearization of G at h = 0 on the cylinder of radius r:
///   lambda(k, m; r) = -(k^2 + m^2/r^2) (k^2 + (m^2 - 1)/r^2).
/// k is the integer axial wavenumber for the default 2 pi period.
double dispersion(int k, int m, double r);

struct JacobianProbe {
  double coarse = 0.0;        // central difference at eps
  double fine = 0.0;          // central difference at eps / 2
  double extrapolated = 0.0;  // Richardson: (4 fine - coarse) / 3
};

/// Independent oracle for dispersion(): central difference of the nonlinear
/// G at 0 in the direction eps cos(kx + m theta), projected back onto that
/// direction. grid_n = 0 picks the smallest power of two >= max(32, 4 max(k, m)).
/// Throws InvalidArgument when eps is outside [1e-7, 1e-3] or the mode is not
/// below the Nyquist limit of the chosen grid.
JacobianProbe probe_jacobian_mode(int k, int m, double r, double eps, int grid_n = 0);
double numerical_jacobian_mode(int k, int m, double r, double eps, int grid_n = 0);

enum class ModeClass { zero, stable, unstable };
enum class StabilityVerdict { normally_stable, unstable, degenerate };

std::string to_string(ModeClass c);
std::string to_string(StabilityVerdict v);

struct ModeRate {
  int k = 0;
  int m = 0;
  double lambda = 0.0;
  ModeClass cls = ModeClass::zero;
};

struct DispersionTable {
  double r = 1.0;
  std::vector<ModeRate> modes;  // lexicographic in (k, m)
  StabilityVerdict verdict = StabilityVerdict::degenerate;

  /// Slowest-decaying stable mode, ties broken lexicographically.
  const ModeRate* slowest_stable() const;
  std::vector<ModeRate> unstable_modes() const;
  std::vector<ModeRate> zero_modes() const;
  /// Real dimension of the neutral space: (0,0) counts 1, (k,0) and (0,m)
  /// count 2 (cos and sin), mixed modes count 4.
  int neutral_dimension() const;
};

/// Tolerance below which |lambda| is classified as zero, relative to the
/// mode's scale (k^2 + m^2/r^2)^2.
inline constexpr double kZeroRateTolerance = 1e-12;

/// Table over 0 <= k <= k_max, 0 <= m <= m_max. Requires r > 0 and cutoffs >= 2.
DispersionTable classify_stability(double r, int k_max, int m_max);

/// CSV with header "k,m,lambda,class".
void write_csv(std::ostream& out, const DispersionTable& table);
DispersionTable read_dispersion_csv(std::istream& in, double r);

}  // namespace sdflow
