// Acceptance suite: one line per criterion, exit status 0 iff all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <tuple>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sdflow/cli/experiments.hpp"
#include "sdflow/criticality.hpp"
#include "sdflow/diagnostics.hpp"
#include "sdflow/geometry.hpp"
#include "sdflow/linearization.hpp"
#include "sdflow/spectral.hpp"

using namespace sdflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

fs::path out_root() {
  const fs::path p = fs::temp_directory_path() / "sdflow_acceptance";
  return p;
}

const cli::ExperimentResult& experiment(const std::string& name, const std::string& tag = "",
                                        const cli::Overrides& extra = {}) {
  static std::map<std::string, cli::ExperimentResult> cache;
  const std::string key = name + "#" + tag;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  cli::Overrides o = extra;
  o.emplace_back("output.dir", (out_root() / (name + tag)).string());
  return cache.emplace(key, cli::run_experiment(name, o)).first->second;
}

double summary_rate(const nlohmann::json& s) {
  return s["fitted_rate"].is_number() ? s["fitted_rate"].get<double>() : std::nan("");
}

Outcome equilibrium_family() {
  Outcome o;
  double worst = 0.0;
  for (const Grid& g : {Grid(128, 1, 1.0), Grid(64, 64, 1.0)})
    for (double c : {-0.3, 0.0, 0.5}) worst = std::max(worst, sd_operator(Field(g, c)).max_abs());
  o.pass = worst <= 1e-10;
  o.detail = fmt("max |G(c)| = %.3g over c in {-0.3, 0, 0.5}, n = 128 and 64x64", worst);
  return o;
}

Outcome split_consistency() {
  Outcome o;
  double worst = 0.0;
  for (auto [nx, nt, degree, amp] : {std::tuple{256, 1, 6, 0.2}, std::tuple{128, 128, 4, 0.1}}) {
    const Grid g(nx, nt, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Field h = oracle::random_trig(g, 500 + seed, degree, amp);
      const Field G = sd_operator(h);
      worst = std::max(worst, (quasilinear_split(h).reconstruct(h) - G).max_abs() / G.max_abs());
    }
  }
  o.pass = worst <= 1e-8;
  o.detail = fmt("max relative residual %.3g over 20 seeded fields, 1D n = 256 and 2D 128x128", worst);
  return o;
}

Outcome dispersion_oracle() {
  Outcome o;
  double worst_rel = 0.0, worst_neutral = 0.0;
  for (double r : {0.7, 1.0, 1.5})
    for (int k = 0; k <= 8; ++k)
      for (int m = 0; m <= 8; ++m) {
        const double exact = dispersion(k, m, r);
        const double est = numerical_jacobian_mode(k, m, r, 1e-3);
        if (exact == 0.0) {
          worst_neutral = std::max(worst_neutral, std::abs(est));
          if (std::abs(est) > 1e-6) o.pass = false;
        } else {
          const double rel = std::abs(est - exact) / std::abs(exact);
          worst_rel = std::max(worst_rel, rel);
          if (rel > 1e-5) o.pass = false;
        }
      }
  o.detail = fmt("max relative error %.3g, max |lambda| at neutral modes %.3g", worst_rel, worst_neutral);
  return o;
}

Outcome stability() {
  Outcome o;
  const double want = -5.0 / 9.0;
  for (const char* name : {"axisym_stab", "stab_r1.5"}) {
    const auto& s = experiment(name).summary;
    const double rate = summary_rate(s);
    const bool ok = s["termination"] == "completed" && std::abs(rate - want) <= 0.1 * std::abs(want);
    o.pass = o.pass && ok;
    o.detail += name + fmt(" rate %.5f (%.2f%% off)  ", rate, 100 * std::abs(rate - want) / std::abs(want));
  }
  return o;
}

Outcome instability() {
  Outcome o;
  const double want = 1.0 / 0.49 - 1.0;
  for (const char* name : {"axisym_instab", "instab_r0.7"}) {
    const auto& s = experiment(name, "", {{"amplitude", "1e-4"}}).summary;
    const double rate = summary_rate(s);
    const bool ok = std::abs(rate - want) <= 0.1 * want;
    o.pass = o.pass && ok;
    o.detail += std::string(name) + fmt(" rate %.5f on [%.2f, %.2f]  ", rate, s["fit_window"][0].get<double>(),
                                        s["fit_window"][1].get<double>());
  }
  return o;
}

Outcome conservation() {
  Outcome o;
  for (const char* name : {"axisym_stab", "stab_r1.5"}) {
    const auto& s = experiment(name).summary;
    const double vol = s["max_volume_drift"].get<double>();
    const double area = s["max_area_increase"].get<double>();
    o.pass = o.pass && vol <= 1e-6 && area <= 1e-8;
    o.detail += std::string(name) + fmt(" volume drift %.3g, max area step %.3g  ", vol, area);
  }
  return o;
}

Outcome ledger() {
  Outcome o;
  const WeightSystem ws = sdflow_ledger();
  const bool mu_ok = ws.mu_crit() == Rational(1, 4);
  std::vector<std::pair<Rational, Rational>> crit;
  for (const auto& p : ws.critical()) crit.push_back({p.rho, p.beta_j});
  std::sort(crit.begin(), crit.end());
  std::vector<std::pair<Rational, Rational>> want = {
      {Rational(1, 2), Rational(3, 4)}, {Rational(1), Rational(1, 2)}, {Rational(3, 2), Rational(1, 4)}};
  std::sort(want.begin(), want.end());
  int sub = 0;
  for (const auto& p : ws.pairs) sub += p.cls == PairClass::subcritical;
  o.pass = mu_ok && crit == want && sub == 5 && ws.pairs.size() == 8;
  o.detail = "mu_crit = " + std::to_string(ws.mu_crit().numerator()) + "/" +
             std::to_string(ws.mu_crit().denominator()) + ", " + std::to_string(crit.size()) +
             " critical pairs, " + std::to_string(sub) + " subcritical";
  return o;
}

Outcome dual_norm() {
  Outcome o;
  for (const char* name : {"axisym_stab", "stab_r1.5"}) {
    const auto& d = experiment(name).summary["dual_norm_rates"];
    const double a = d["norm_1a"]["rate"].get<double>(), b = d["norm_3a"]["rate"].get<double>();
    const double dis = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
    o.pass = o.pass && dis <= 0.15;
    o.detail += std::string(name) + fmt(" rates %.5f / %.5f (%.2f%% apart)  ", a, b, 100 * dis);
  }
  return o;
}

// Linear flow at the flat cylinder applied in Fourier space.
Field evolve_linear(const Field& f, double t) {
  Spectrum s(f);
  const double r = f.grid().r();
  s.apply([&](int k, int m) { return std::exp(dispersion(k, m, r) * t); });
  return s.to_field();
}

Outcome interpolation() {
  Outcome o;
  // Reiteration ratio over sin(kx), k = 1..8, and 50 seeded polynomials of degree <= 10.
  auto family_bound = [](int n) {
    const Grid g(n, 1, 1.5);
    double bound = 0.0;
    for (int k = 1; k <= 8; ++k)
      bound = std::max(bound, interpolation_ratio(Field::sample(g, [&](double x, double) { return std::sin(k * x); }), 0.5));
    for (std::uint64_t seed = 0; seed < 50; ++seed)
      bound = std::max(bound, interpolation_ratio(oracle::random_trig(g, 9000 + seed, 10, 1.0), 0.5));
    return bound;
  };
  const double c64 = family_bound(64), c128 = family_bound(128), c256 = family_bound(256);
  const double drift = std::max(std::abs(c128 - c64), std::abs(c256 - c64)) / c64;
  const bool reiteration_ok = std::isfinite(c256) && drift <= 0.2;

  // Time-weighted estimate along the linear flow: fit C on decades, check a dense t grid.
  const Grid g(128, 1, 1.5);
  const WeightSystem ws = sdflow_ledger();
  auto worst_ratio = [&](const std::vector<double>& times, std::uint64_t seed0) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Field x0 = oracle::random_trig(g, seed0 + 2 * s, 10, 0.1);
      const Field y0 = oracle::random_trig(g, seed0 + 2 * s + 1, 10, 0.1);
      for (double t : times) {
        const Field x = evolve_linear(x0, t), y = evolve_linear(y0, t);
        for (const auto& p : ws.pairs) worst = std::max(worst, interpolation_terms(x, y, p, ws, t, 0.5).ratio());
      }
    }
    return worst;
  };
  const double C = worst_ratio({1e-3, 1e-2, 1e-1, 1.0}, 700);
  std::vector<double> dense;
  for (int i = 0; i <= 24; ++i) dense.push_back(std::pow(10.0, -3.0 + 3.0 * i / 24));
  const double held_out = worst_ratio(dense, 800);
  const bool estimate_ok = std::isfinite(C) && held_out <= 1.25 * C;
  o.pass = reiteration_ok && estimate_ok;
  o.detail = fmt("reiteration bound %.4f (n=64) %.4f (n=256), drift %.2f%%; ", c64, c256, 100 * drift) +
             fmt("time-weighted C = %.4f, held-out max %.4f", C, held_out);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  for (const char* name : {"axisym_stab", "stab_r1.5"}) {
    const auto& a = experiment(name);
    const auto& b = experiment(name, "_rerun");
    const bool same_csv = slurp(fs::path(a.output_dir) / "run.csv") == slurp(fs::path(b.output_dir) / "run.csv");
    const auto va = a.record->final_state.values(), vb = b.record->final_state.values();
    const bool same_state = va.size() == vb.size() && std::memcmp(va.data(), vb.data(), va.size_bytes()) == 0;
    o.pass = o.pass && same_csv && same_state;
    o.detail += std::string(name) + (same_csv && same_state ? " identical  " : " DIFFERS  ");
  }
  return o;
}

}  // namespace

int main() {
  fs::remove_all(out_root());
  fs::create_directories(out_root());
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "equilibrium family", equilibrium_family},
      {2, "split consistency", split_consistency},
      {3, "dispersion vs Jacobian oracle", dispersion_oracle},
      {4, "stability experiment r = 1.5", stability},
      {5, "instability experiment r = 0.7", instability},
      {6, "conservation and dissipation", conservation},
      {7, "criticality ledger", ledger},
      {8, "dual-norm stability", dual_norm},
      {9, "interpolation properties", interpolation},
      {10, "determinism", determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !out.pass;
    std::printf("criterion %2d %-32s %s  %s  [%.1fs]\n", c.id, c.name, out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
