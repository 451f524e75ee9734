#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sdflow/errors.hpp"
#include "sdflow/linearization.hpp"

using namespace sdflow;

TEST_CASE("dispersion examples") {
  CHECK(dispersion(1, 0, 1.0) == 0.0);
  CHECK(dispersion(1, 0, 0.7) == doctest::Approx(1.0 / 0.49 - 1.0).epsilon(1e-15));
  CHECK(dispersion(1, 0, 1.5) == doctest::Approx(-5.0 / 9.0).epsilon(1e-15));
  CHECK(dispersion(0, 0, 2.0) == 0.0);
  CHECK(dispersion(0, 1, 0.3) == 0.0);
}

TEST_CASE("dispersion reflection symmetry") {
  for (double r : {0.5, 1.0, 2.0})
    for (int k = 0; k <= 6; ++k)
      for (int m = 0; m <= 6; ++m) {
        CHECK(dispersion(-k, m, r) == dispersion(k, m, r));
        CHECK(dispersion(k, -m, r) == dispersion(k, m, r));
      }
}

TEST_CASE("numerical Jacobian oracle") {
  CHECK(std::abs(numerical_jacobian_mode(0, 0, 1.3, 1e-3)) < 1e-8);
  CHECK(std::abs(numerical_jacobian_mode(0, 1, 1.3, 1e-3)) < 1e-6);
  CHECK(numerical_jacobian_mode(1, 0, 1.5, 1e-3) == doctest::Approx(-5.0 / 9.0).epsilon(1e-5));
  const JacobianProbe p = probe_jacobian_mode(2, 1, 0.8, 1e-3);
  // Richardson removes the O(eps^2) bias: extrapolated is closer than fine.
  const double exact = dispersion(2, 1, 0.8);
  CHECK(std::abs(p.extrapolated - exact) <= std::abs(p.fine - exact) + 1e-12);
  CHECK_THROWS_AS(numerical_jacobian_mode(1, 0, 1.0, 1e-2), InvalidArgument);
  CHECK_THROWS_AS(numerical_jacobian_mode(1, 0, 1.0, 1e-9), InvalidArgument);
  CHECK_THROWS_AS(numerical_jacobian_mode(16, 0, 1.0, 1e-3, 32), InvalidArgument);
}

TEST_CASE("closed form agrees with the oracle") {
  for (double r : {0.7, 1.0, 1.5})
    for (int k = 0; k <= 8; ++k)
      for (int m = 0; m <= 8; ++m) {
        const double exact = dispersion(k, m, r);
        const double est = numerical_jacobian_mode(k, m, r, 1e-3);
        if (exact == 0.0) {
          CHECK(std::abs(est) < 1e-6);
        } else {
          CHECK(std::abs(est - exact) <= 1e-5 * std::abs(exact));
        }
      }
}

TEST_CASE("stability classification") {
  SUBCASE("r = 1.5") {
    const DispersionTable t = classify_stability(1.5, 8, 8);
    CHECK(t.verdict == StabilityVerdict::normally_stable);
    REQUIRE(t.slowest_stable() != nullptr);
    CHECK(t.slowest_stable()->k == 1);
    CHECK(t.slowest_stable()->m == 0);
    CHECK(t.slowest_stable()->lambda == doctest::Approx(-5.0 / 9.0));
    CHECK(t.neutral_dimension() == 3);
    for (const ModeRate& m : t.modes) {
      if ((m.k == 0 && m.m <= 1)) CHECK(m.cls == ModeClass::zero);
      else CHECK(m.lambda < 0.0);
    }
  }
  SUBCASE("r = 0.7") {
    const DispersionTable t = classify_stability(0.7, 8, 8);
    CHECK(t.verdict == StabilityVerdict::unstable);
    const auto u = t.unstable_modes();
    REQUIRE(u.size() == 1);
    CHECK(u[0].k == 1);
    CHECK(u[0].m == 0);
    CHECK(t.neutral_dimension() == 3);
  }
  SUBCASE("r = 1") {
    const DispersionTable t = classify_stability(1.0, 4, 4);
    CHECK(t.verdict == StabilityVerdict::degenerate);
    CHECK(t.neutral_dimension() > 3);
  }
  SUBCASE("generic radii keep three neutral dimensions") {
    for (double r : {0.3, 0.55, 1.7, 4.0}) CHECK(classify_stability(r, 6, 6).neutral_dimension() == 3);
  }
  CHECK_THROWS_AS(classify_stability(1.0, 1, 4), InvalidArgument);
  CHECK_THROWS_AS(classify_stability(0.0, 4, 4), InvalidArgument);
}

TEST_CASE("dispersion csv round trip") {
  const DispersionTable t = classify_stability(0.7, 5, 3);
  std::stringstream ss;
  write_csv(ss, t);
  const DispersionTable back = read_dispersion_csv(ss, 0.7);
  REQUIRE(back.modes.size() == t.modes.size());
  for (std::size_t i = 0; i < t.modes.size(); ++i) {
    CHECK(back.modes[i].k == t.modes[i].k);
    CHECK(back.modes[i].m == t.modes[i].m);
    CHECK(back.modes[i].lambda == t.modes[i].lambda);
    CHECK(back.modes[i].cls == t.modes[i].cls);
  }
  CHECK(back.verdict == t.verdict);
  std::stringstream bad("k,m,lambda\n");
  CHECK_THROWS(read_dispersion_csv(bad, 1.0));
}
