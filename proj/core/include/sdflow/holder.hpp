#pragma once

#include <cstddef>
#include <cstdint>

#include "sdflow/grid.hpp"

namespace sdflow {

/// Discrete little-Hoelder norm on the global (x, theta) chart:
///
///   N_{k+alpha}(f) = sum_{|eta| <= k} sup |d^eta f| + max_{|eta| = k} [d^eta f]_alpha
///
/// where [g]_alpha = max over distinct grid points p, q of
/// |g(p) - g(q)| / d(p, q)^alpha and d is the periodic intrinsic distance
/// sqrt(dx^2 + r^2 dtheta^2).
struct HolderNorm {
  int k = 0;
  double alpha = 0.5;
  double value = 0.0;
  /// True when the seminorm was estimated from sampled pairs.
  bool sampled = false;
  std::uint64_t seed = 0;
};

struct HolderOptions {
  /// Grids with more points use sampled pairs instead of all pairs.
  std::size_t max_exhaustive_points = 128 * 128;
  std::size_t sampled_pairs = std::size_t{1} << 22;
  std::uint64_t seed = 0x5DF10A11ull;
};

/// Hoelder seminorm [g]_alpha over grid-point pairs.
double holder_seminorm(const Field& g, double alpha, const HolderOptions& options = {});

/// k in {0..4}, alpha in (0, 1).
HolderNorm holder_norm(const Field& f, int k, double alpha, const HolderOptions& options = {});

/// Periodic intrinsic distance between grid points offset by (di, dj).
double intrinsic_distance(const Grid& grid, int di, int dj);

}  // namespace sdflow
