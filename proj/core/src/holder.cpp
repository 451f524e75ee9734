#include "sdflow/holder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "sdflow/errors.hpp"
#include "sdflow/spectral.hpp"

namespace sdflow {

double intrinsic_distance(const Grid& grid, int di, int dj) {
  const int nx = grid.n_x();
  const int nt = grid.n_theta();
  di = ((di % nx) + nx) % nx;
  dj = ((dj % nt) + nt) % nt;
  const double ax = std::min(di, nx - di) * grid.dx();
  const double at = grid.axisymmetric() ? 0.0 : std::min(dj, nt - dj) * grid.dtheta();
  return std::hypot(ax, grid.r() * at);
}

namespace {

struct Offset {
  int di;
  int dj;
  double weight;  // d^-alpha
};

// Offsets covering each unordered pair once, by decreasing weight.
std::vector<Offset> half_offsets(const Grid& grid, double alpha) {
  const int nx = grid.n_x();
  const int nt = grid.n_theta();
  std::vector<Offset> out;
  out.reserve(grid.size() / 2 + nt);
  for (int di = 0; di < nx; ++di) {
    for (int dj = 0; dj < nt; ++dj) {
      // (di, dj) and (-di, -dj) give the same unordered pairs.
      const int ni = (nx - di) % nx;
      const int nj = (nt - dj) % nt;
      const bool self_inverse = ni == di && nj == dj;
      if (di == 0 && dj == 0) continue;
      if (!self_inverse && (ni < di || (ni == di && nj < dj))) continue;
      out.push_back({di, dj, std::pow(intrinsic_distance(grid, di, dj), -alpha)});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Offset& a, const Offset& b) { return a.weight > b.weight; });
  return out;
}

double exhaustive_seminorm(const Field& g, double alpha) {
  const Grid& grid = g.grid();
  const int nx = grid.n_x();
  const int nt = grid.n_theta();
  const double range = g.max() - g.min();
  if (range == 0.0) return 0.0;
  double best = 0.0;
  for (const Offset& off : half_offsets(grid, alpha)) {
    // No pair at this or any later (farther) offset can beat the current best.
    if (range * off.weight <= best) break;
    double local = 0.0;
    for (int i = 0; i < nx; ++i) {
      const int i2 = (i + off.di) % nx;
      const double* row = &g.values()[grid.index(i, 0)];
      const double* row2 = &g.values()[grid.index(i2, 0)];
      for (int j = 0; j < nt; ++j) {
        const int j2 = (j + off.dj) % nt;
        local = std::max(local, std::abs(row[j] - row2[j2]));
      }
    }
    best = std::max(best, local * off.weight);
  }
  return best;
}

double sampled_seminorm(const Field& g, double alpha, const HolderOptions& options) {
  const Grid& grid = g.grid();
  const int nx = grid.n_x();
  const int nt = grid.n_theta();
  double best = 0.0;
  // Near neighbours exhaustively: they carry the largest weights.
  for (int di = -2; di <= 2; ++di) {
    for (int dj = -2; dj <= 2; ++dj) {
      if ((di == 0 && dj == 0) || (grid.axisymmetric() && dj != 0)) continue;
      const double w = std::pow(intrinsic_distance(grid, di, dj), -alpha);
      for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nt; ++j) {
          const int i2 = ((i + di) % nx + nx) % nx;
          const int j2 = ((j + dj) % nt + nt) % nt;
          best = std::max(best, std::abs(g(i, j) - g(i2, j2)) * w);
        }
      }
    }
  }
  std::mt19937_64 rng(options.seed);
  const std::uint64_t n = grid.size();
  for (std::size_t s = 0; s < options.sampled_pairs; ++s) {
    const std::size_t p = rng() % n;
    const std::size_t q = rng() % n;
    if (p == q) continue;
    const int di = static_cast<int>(q / nt) - static_cast<int>(p / nt);
    const int dj = static_cast<int>(q % nt) - static_cast<int>(p % nt);
    const double d = intrinsic_distance(grid, di, dj);
    if (d == 0.0) continue;
    best = std::max(best, std::abs(g[p] - g[q]) * std::pow(d, -alpha));
  }
  return best;
}

}  // namespace

double holder_seminorm(const Field& g, double alpha, const HolderOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (g.size() > options.max_exhaustive_points) return sampled_seminorm(g, alpha, options);
  return exhaustive_seminorm(g, alpha);
}

HolderNorm holder_norm(const Field& f, int k, double alpha, const HolderOptions& options) {
  if (k < 0 || k > 4) throw InvalidArgument("holder_norm: k must lie in 0..4");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("holder_norm: alpha must lie in (0, 1)");
  HolderNorm norm;
  norm.k = k;
  norm.alpha = alpha;
  norm.sampled = f.size() > options.max_exhaustive_points;
  norm.seed = norm.sampled ? options.seed : 0;

  const bool axisym = f.grid().axisymmetric();
  const Spectrum spectrum(f);
  double sups = 0.0;
  double top = 0.0;
  for (int order = 0; order <= k; ++order) {
    for (const MultiIndex& eta : multi_indices(order, axisym)) {
      const Field d = order == 0 ? f : spectrum.derivative(eta.ox, eta.ot);
      sups += d.max_abs();
      if (order == k) top = std::max(top, holder_seminorm(d, alpha, options));
    }
  }
  norm.value = sups + top;
  return norm;
}

}  // namespace sdflow
