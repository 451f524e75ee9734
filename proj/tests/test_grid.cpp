#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"
#include "sdflow/holder.hpp"
#include "sdflow/spectral.hpp"

using namespace sdflow;
using oracle::pi;

TEST_CASE("grid shape validation") {
  CHECK_NOTHROW(Grid(8, 1, 1.0));
  CHECK_NOTHROW(Grid(64, 16, 0.5));
  CHECK_THROWS_AS(Grid(4, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(48, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(64, 4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(64, 12, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(64, 1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(64, 1, 1.0, -1.0), InvalidArgument);
  const Grid g(16, 8, 2.0);
  CHECK(g.size() == 128);
  CHECK(g.dx() == doctest::Approx(2 * pi / 16));
  CHECK(g.theta(3) == doctest::Approx(3 * 2 * pi / 8));
  CHECK(Grid(16, 1, 2.0).axisymmetric());
}

TEST_CASE("field arithmetic and admissibility") {
  const Grid g(16, 1, 1.0);
  Field a(g, 2.0), b(g, 3.0);
  CHECK((a + b).max() == 5.0);
  CHECK((a - b).min() == -1.0);
  CHECK((a * 0.5).max() == 1.0);
  Field c = a;
  c *= b;
  CHECK(c.mean() == 6.0);
  CHECK(Field(g, -0.5).all_finite());
  CHECK_NOTHROW(require_admissible(Field(g, -0.5)));
  CHECK_THROWS_AS(require_admissible(Field(g, -1.0)), AdmissibilityError);
  CHECK_THROWS_AS(require_admissible(Field(g, -0.5), 0.6), AdmissibilityError);
  CHECK(axis_clearance(Field(g, -0.25)) == doctest::Approx(0.75));
  CHECK_THROWS_AS(a += Field(Grid(32, 1, 1.0)), InvalidArgument);
  Field nan(g, 0.0);
  nan[3] = std::nan("");
  CHECK_FALSE(nan.all_finite());
}

TEST_CASE("spectral derivative examples") {
  SUBCASE("sin x") {
    const Grid g(32, 1, 1.0);
    const Field d = spectral_derivative(Field::sample(g, [](double x, double) { return std::sin(x); }), 1, 0).field;
    const Field want = Field::sample(g, [](double x, double) { return std::cos(x); });
    CHECK((d - want).max_abs() < 1e-14);
  }
  SUBCASE("constant") {
    const Grid g(16, 16, 1.0);
    for (int order = 1; order <= 4; ++order)
      for (auto mi : multi_indices(order, false)) {
        CHECK(spectral_derivative(Field(g, 3.0), mi.ox, mi.ot).field.max_abs() < 1e-12);
      }
  }
  SUBCASE("symbolic oracle sin(3x)cos(2t)") {
    const Grid g(32, 16, 1.0);
    const Field f = Field::sample(g, [](double x, double t) { return std::sin(3 * x) * std::cos(2 * t); });
    const Field d = spectral_derivative(f, 2, 1).field;
    const Field want = Field::sample(g, [](double x, double t) { return 18 * std::sin(3 * x) * std::sin(2 * t); });
    CHECK((d - want).max_abs() < 1e-12);
  }
  SUBCASE("every multi-index against analytic derivatives") {
    const Grid g(32, 16, 1.3);
    const int k = 2, m = 3;
    const Field f = Field::sample(g, [&](double x, double t) { return std::cos(k * x + m * t); });
    for (int order = 0; order <= 4; ++order)
      for (auto mi : multi_indices(order, false)) {
        // d^n cos(phi) = cos(phi + n pi/2)
        const double scale = std::pow(k, mi.ox) * std::pow(m, mi.ot);
        const Field want = Field::sample(g, [&](double x, double t) {
          return scale * std::cos(k * x + m * t + order * pi / 2);
        });
        CHECK((spectral_derivative(f, mi.ox, mi.ot).field - want).max_abs() < 1e-11 * scale + 1e-13);
      }
  }
  SUBCASE("axisymmetric theta derivative is flagged zero") {
    const Grid g(16, 1, 1.0);
    const auto res = spectral_derivative(Field::sample(g, [](double x, double) { return std::sin(x); }), 1, 1);
    CHECK(res.theta_degenerate);
    CHECK(res.field.max_abs() == 0.0);
  }
  SUBCASE("order errors") {
    const Grid g(16, 1, 1.0);
    CHECK_THROWS_AS(spectral_derivative(Field(g), 5, 0), InvalidArgument);
    CHECK_THROWS_AS(spectral_derivative(Field(g), 3, 2), InvalidArgument);
    CHECK_THROWS_AS(spectral_derivative(Field(g), -1, 0), InvalidArgument);
  }
}

TEST_CASE("spectral derivative is linear and translation equivariant") {
  const Grid g(32, 16, 1.0);
  const Field f = oracle::random_trig(g, 11, 6, 1.0);
  const Field q = oracle::random_trig(g, 12, 6, 1.0);
  for (int order = 1; order <= 4; ++order)
    for (auto mi : multi_indices(order, false)) {
      const Field d = spectral_derivative(f, mi.ox, mi.ot).field;
      const Field shifted = spectral_derivative(f.shifted(5, 3), mi.ox, mi.ot).field;
      CHECK((shifted - d.shifted(5, 3)).max_abs() < 1e-11 * (1 + d.max_abs()));
      const Field lin = spectral_derivative(f * 2.0 + q, mi.ox, mi.ot).field;
      const Field sum = d * 2.0 + spectral_derivative(q, mi.ox, mi.ot).field;
      CHECK((lin - sum).max_abs() < 1e-11 * (1 + sum.max_abs()));
    }
}

TEST_CASE("integral of a derivative vanishes") {
  for (int nt : {1, 16}) {
    const Grid g(64, nt, 1.0);
    const Field f = oracle::random_trig(g, 5, 12, 1.0);
    for (int order = 1; order <= 4; ++order)
      for (auto mi : multi_indices(order, g.axisymmetric())) {
        const Field d = spectral_derivative(f, mi.ox, mi.ot).field;
        CHECK(std::abs(integrate(d)) < 1e-12 * (1 + d.max_abs()) * 4 * pi * pi);
      }
  }
}

TEST_CASE("dealias removes the top third of the spectrum") {
  const Grid g(64, 1, 1.0);
  const Field low = Field::sample(g, [](double x, double) { return std::cos(20 * x); });
  const Field high = Field::sample(g, [](double x, double) { return std::cos(22 * x); });
  CHECK((dealias(low) - low).max_abs() < 1e-13);
  CHECK(dealias(high).max_abs() < 1e-13);
}

TEST_CASE("integrate examples") {
  const Grid g2(32, 16, 1.0), g1(32, 1, 1.0);
  CHECK(integrate(Field(g2, 1.0), Field(g2, 1.0)) == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  CHECK(integrate(Field(g1, 1.0), Field(g1, 1.0)) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(std::abs(integrate(Field::sample(g1, [](double x, double) { return std::sin(x); }))) < 1e-14);
  CHECK(integrate(Field::sample(g1, [](double x, double) { return std::pow(std::sin(2 * x), 2); })) ==
        doctest::Approx(pi).epsilon(1e-14));
  CHECK_THROWS_AS(integrate(Field(g1), Field(g2)), InvalidArgument);
}

TEST_CASE("snapshot round trip is bit exact") {
  const Grid g(16, 8, 0.7, 3.0);
  Field f = oracle::random_trig(g, 3, 5, 0.3);
  f[0] = 4.9406564584124654e-324;
  f[1] = -1.0 / 3.0;
  f[2] = 1e300;
  std::stringstream ss;
  write_snapshot(ss, f);
  const Field back = read_snapshot(ss);
  CHECK(back.grid() == g);
  for (std::size_t p = 0; p < f.size(); ++p) CHECK(back[p] == f[p]);

  std::stringstream bad("SDFLOW1 16 1 1.0 6.28\n1\n2\n");
  CHECK_THROWS(read_snapshot(bad));
  std::stringstream header("NOPE 16 1 1 1\n");
  CHECK_THROWS(read_snapshot(header));
}

TEST_CASE("holder norm examples") {
  SUBCASE("constant") {
    const Grid g(16, 1, 1.0);
    CHECK(holder_norm(Field(g, 5.0), 0, 0.5).value == doctest::Approx(5.0));
  }
  SUBCASE("unit spike") {
    for (int nt : {1, 8}) {
      const Grid g(16, nt, 1.0);
      Field f(g, 0.0);
      f(3, 0) = 1.0;
      const double spacing = std::min(g.dx(), g.axisymmetric() ? 1e9 : g.r() * g.dtheta());
      const double want = 1.0 + 1.0 / std::pow(spacing, 0.5);
      CHECK(holder_norm(f, 0, 0.5).value == doctest::Approx(want).epsilon(1e-14));
      CHECK(holder_norm(f, 0, 0.5).value == doctest::Approx(1.0 + oracle::seminorm(f, 0.5)).epsilon(1e-14));
    }
  }
  SUBCASE("sin x against brute force") {
    const Grid g(64, 1, 1.0);
    const Field f = Field::sample(g, [](double x, double) { return std::sin(x); });
    CHECK(holder_norm(f, 1, 0.5).value == doctest::Approx(oracle::holder_norm(f, 1, 0.5)).epsilon(1e-13));
  }
  SUBCASE("random 2D fields, all k, against brute force") {
    const Grid g(16, 8, 0.8);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Field f = oracle::random_trig(g, seed, 4, 0.2);
      for (int k = 0; k <= 4; ++k)
        for (double alpha : {0.25, 0.5, 0.9}) {
          CHECK(holder_norm(f, k, alpha).value ==
                doctest::Approx(oracle::holder_norm(f, k, alpha)).epsilon(1e-13));
        }
    }
  }
  SUBCASE("sampled mode above the exhaustive limit") {
    const Grid g(256, 128, 1.0);
    const Field f = oracle::random_trig(g, 1, 3, 1.0);
    HolderOptions opts;
    const HolderNorm n = holder_norm(f, 1, 0.5, opts);
    CHECK(n.sampled);
    CHECK(n.seed == opts.seed);
    CHECK(holder_norm(f, 1, 0.5, opts).value == n.value);
    const Grid small(32, 16, 1.0);
    CHECK_FALSE(holder_norm(oracle::random_trig(small, 1, 3, 1.0), 1, 0.5).sampled);
  }
  CHECK_THROWS_AS(holder_norm(Field(Grid(16, 1, 1.0)), 5, 0.5), InvalidArgument);
  CHECK_THROWS_AS(holder_norm(Field(Grid(16, 1, 1.0)), 1, 1.0), InvalidArgument);
}

TEST_CASE("holder norm is a norm") {
  const Grid g(32, 8, 1.0);
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 6; ++trial) {
    const Field f = oracle::random_trig(g, gen(), 5, 0.5);
    const Field q = oracle::random_trig(g, gen(), 5, 0.5);
    for (int k = 0; k <= 4; ++k) {
      const double nf = holder_norm(f, k, 0.5).value;
      const double nq = holder_norm(q, k, 0.5).value;
      CHECK(holder_norm(f * -2.5, k, 0.5).value == doctest::Approx(2.5 * nf).epsilon(1e-12));
      CHECK(holder_norm(f + q, k, 0.5).value <= (nf + nq) * (1 + 1e-12));
    }
  }
}

TEST_CASE("holder scale is monotone in k") {
  for (int nt : {1, 8}) {
    const Grid g(64, nt, 1.2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Field f = oracle::random_trig(g, seed, 8, 0.3);
      double prev = holder_norm(f, 0, 0.5).value;
      CHECK(prev >= f.max_abs());
      for (int k = 1; k <= 4; ++k) {
        const double cur = holder_norm(f, k, 0.5).value;
        CHECK(cur >= prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("intrinsic distance wraps") {
  const Grid g(16, 8, 2.0);
  CHECK(intrinsic_distance(g, 1, 0) == doctest::Approx(g.dx()));
  CHECK(intrinsic_distance(g, 15, 0) == doctest::Approx(g.dx()));
  CHECK(intrinsic_distance(g, 0, 7) == doctest::Approx(2.0 * g.dtheta()));
  CHECK(intrinsic_distance(g, 3, 4) == doctest::Approx(std::hypot(3 * g.dx(), 2.0 * pi)));
}
