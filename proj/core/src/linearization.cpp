#include "sdflow/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sdflow/errors.hpp"
#include "sdflow/geometry.hpp"
#include "sdflow/grid.hpp"

namespace sdflow {

double dispersion(int k, int m, double r) {
  const double kk = static_cast<double>(k) * k;
  const double mm = static_cast<double>(m) * m;
  const double r2 = r * r;
  return -(kk + mm / r2) * (kk + (mm - 1.0) / r2) + 0.0;  // no -0
}

namespace {

int pick_grid_size(int k, int m, int requested) {
  if (requested > 0) return requested;
  int n = 32;
  while (n < 4 * std::max(std::abs(k), std::abs(m))) n *= 2;
  return n;
}

double central_difference_rate(const Grid& grid, int k, int m, double eps) {
  const Field direction = Field::sample(grid, [&](double x, double t) {
    return std::cos(k * x + m * t);
  });
  const Field g_plus = sd_operator(direction * eps);
  const Field g_minus = sd_operator(direction * (-eps));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    num += (g_plus[p] - g_minus[p]) * direction[p];
    den += direction[p] * direction[p];
  }
  return num / (2.0 * eps * den);
}

}  // namespace

JacobianProbe probe_jacobian_mode(int k, int m, double r, double eps, int grid_n) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) throw InvalidArgument("eps must lie in [1e-7, 1e-3]");
  if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
  const int n = pick_grid_size(k, m, grid_n);
  if (2 * std::abs(k) >= n || 2 * std::abs(m) >= n) {
    throw InvalidArgument("mode (" + std::to_string(k) + ", " + std::to_string(m) +
                          ") is not resolved on a grid of " + std::to_string(n) + " points");
  }
  const Grid grid(n, n, r);
  JacobianProbe probe;
  probe.coarse = central_difference_rate(grid, k, m, eps);
  probe.fine = central_difference_rate(grid, k, m, eps / 2.0);
  probe.extrapolated = (4.0 * probe.fine - probe.coarse) / 3.0;
  return probe;
}

double numerical_jacobian_mode(int k, int m, double r, double eps, int grid_n) {
  return probe_jacobian_mode(k, m, r, eps, grid_n).extrapolated;
}

std::string to_string(ModeClass c) {
  switch (c) {
    case ModeClass::zero: return "zero";
    case ModeClass::stable: return "stable";
    case ModeClass::unstable: return "unstable";
  }
  return "?";
}

std::string to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::normally_stable: return "normally_stable";
    case StabilityVerdict::unstable: return "unstable";
    case StabilityVerdict::degenerate: return "degenerate";
  }
  return "?";
}

const ModeRate* DispersionTable::slowest_stable() const {
  const ModeRate* best = nullptr;
  for (const ModeRate& mode : modes) {
    if (mode.cls != ModeClass::stable) continue;
    if (!best || mode.lambda > best->lambda) best = &mode;
  }
  return best;
}

std::vector<ModeRate> DispersionTable::unstable_modes() const {
  std::vector<ModeRate> out;
  std::copy_if(modes.begin(), modes.end(), std::back_inserter(out),
               [](const ModeRate& m) { return m.cls == ModeClass::unstable; });
  return out;
}

std::vector<ModeRate> DispersionTable::zero_modes() const {
  std::vector<ModeRate> out;
  std::copy_if(modes.begin(), modes.end(), std::back_inserter(out),
               [](const ModeRate& m) { return m.cls == ModeClass::zero; });
  return out;
}

int DispersionTable::neutral_dimension() const {
  int dim = 0;
  for (const ModeRate& mode : zero_modes()) {
    if (mode.k == 0 && mode.m == 0) {
      dim += 1;
    } else if (mode.k == 0 || mode.m == 0) {
      dim += 2;
    } else {
      dim += 4;
    }
  }
  return dim;
}

DispersionTable classify_stability(double r, int k_max, int m_max) {
  if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
  if (k_max < 2 || m_max < 2) throw InvalidArgument("mode cutoffs must be >= 2");
  DispersionTable table;
  table.r = r;
  bool any_unstable = false;
  bool extra_zero = false;
  for (int k = 0; k <= k_max; ++k) {
    for (int m = 0; m <= m_max; ++m) {
      ModeRate mode{k, m, dispersion(k, m, r), ModeClass::zero};
      const double scale = std::pow(k * k + m * m / (r * r), 2) + 1.0;
      if (std::abs(mode.lambda) <= kZeroRateTolerance * scale) {
        mode.cls = ModeClass::zero;
        const bool tangent = k == 0 && (m == 0 || m == 1);
        extra_zero = extra_zero || !tangent;
      } else if (mode.lambda < 0.0) {
        mode.cls = ModeClass::stable;
      } else {
        mode.cls = ModeClass::unstable;
        any_unstable = true;
      }
      table.modes.push_back(mode);
    }
  }
  if (any_unstable) {
    table.verdict = StabilityVerdict::unstable;
  } else if (extra_zero) {
    table.verdict = StabilityVerdict::degenerate;
  } else {
    table.verdict = StabilityVerdict::normally_stable;
  }
  return table;
}

void write_csv(std::ostream& out, const DispersionTable& table) {
  out << "k,m,lambda,class\n";
  char buf[64];
  for (const ModeRate& mode : table.modes) {
    std::snprintf(buf, sizeof buf, "%.17g", mode.lambda);
    out << mode.k << ',' << mode.m << ',' << buf << ',' << to_string(mode.cls) << '\n';
  }
}

DispersionTable read_dispersion_csv(std::istream& in, double r) {
  DispersionTable table;
  table.r = r;
  std::string line;
  if (!std::getline(in, line) || line != "k,m,lambda,class") {
    throw Error("dispersion csv: unexpected header");
  }
  bool any_unstable = false;
  bool extra_zero = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string k, m, lambda, cls;
    if (!std::getline(row, k, ',') || !std::getline(row, m, ',') ||
        !std::getline(row, lambda, ',') || !std::getline(row, cls)) {
      throw Error("dispersion csv: malformed row '" + line + "'");
    }
    ModeRate mode{std::stoi(k), std::stoi(m), std::strtod(lambda.c_str(), nullptr),
                  ModeClass::zero};
    if (cls == "stable") {
      mode.cls = ModeClass::stable;
    } else if (cls == "unstable") {
      mode.cls = ModeClass::unstable;
      any_unstable = true;
    } else if (cls == "zero") {
      extra_zero = extra_zero || !(mode.k == 0 && (mode.m == 0 || mode.m == 1));
    } else {
      throw Error("dispersion csv: unknown class '" + cls + "'");
    }
    table.modes.push_back(mode);
  }
  table.verdict = any_unstable ? StabilityVerdict::unstable
                  : extra_zero ? StabilityVerdict::degenerate
                               : StabilityVerdict::normally_stable;
  return table;
}

}  // namespace sdflow
