#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccp/quadrature.hpp"

using namespace ccp;

TEST_CASE("constants integrate exactly", "[quadrature]") {
  const double v = integrate2d([](double, double) { return 1.0; },
                               CharRectangle{0.0, 2.0, 0.0, 3.0});
  CHECK(v == Catch::Approx(6.0).margin(1e-14));

  QuadratureRule mid{QuadKind::MidpointComposite, 4, 2};
  const double m = integrate2d([](double, double) { return 1.0; },
                               CharRectangle{0.0, 2.0, 0.0, 3.0}, mid);
  CHECK(m == Catch::Approx(6.0).margin(1e-14));
}

TEST_CASE("16-point Gauss nails exp(z1+z2) on the unit square", "[quadrature]") {
  const double v = integrate2d([](double z1, double z2) { return std::exp(z1 + z2); },
                               CharRectangle{0.0, 1.0, 0.0, 1.0});
  const double exact = (std::exp(1.0) - 1.0) * (std::exp(1.0) - 1.0);
  CHECK(std::abs(v - exact) <= 1e-13);
}

TEST_CASE("2-point Gauss is exact for z1*z2", "[quadrature]") {
  QuadratureRule rule{QuadKind::GaussLegendreTensor, 2, 1};
  const double v = integrate2d([](double z1, double z2) { return z1 * z2; },
                               CharRectangle{0.0, 1.0, 0.0, 1.0}, rule);
  CHECK(v == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("polynomial exactness up to degree 2n-1 per axis", "[quadrature]") {
  for (int n : {1, 2, 3, 4, 5, 8, 16}) {
    QuadratureRule rule{QuadKind::GaussLegendreTensor, n, 1};
    const int deg = 2 * n - 1;
    // integrate z1^deg * z2^deg over [0,1]^2: exact value 1/(deg+1)^2
    const double v = integrate2d(
        [deg](double z1, double z2) { return std::pow(z1, deg) * std::pow(z2, deg); },
        CharRectangle{0.0, 1.0, 0.0, 1.0}, rule);
    const double exact = 1.0 / ((deg + 1.0) * (deg + 1.0));
    CHECK(std::abs(v - exact) / exact <= 1e-13);
  }
}

TEST_CASE("panel refinement converges at the rule's order", "[quadrature]") {
  auto g = [](double z1, double z2) { return std::exp(2.0 * z1 - z2); };
  const CharRectangle rect{0.0, 1.0, 0.0, 1.0};
  const double exact = 0.5 * (std::exp(2.0) - 1.0) * (1.0 - std::exp(-1.0));
  // 3-point Gauss: nominal order 6 under panel halving
  double err[3];
  for (int k = 0; k < 3; ++k) {
    QuadratureRule rule{QuadKind::GaussLegendreTensor, 3, 1 << k};
    err[k] = std::abs(integrate2d(g, rect, rule) - exact);
  }
  const double order = std::log2(err[0] / err[1]);
  CHECK(order >= 5.5);

  // composite midpoint: nominal order 2
  double merr[3];
  for (int k = 0; k < 3; ++k) {
    QuadratureRule rule{QuadKind::MidpointComposite, 8, 1 << k};
    merr[k] = std::abs(integrate2d(g, rect, rule) - exact);
  }
  CHECK(std::log2(merr[0] / merr[1]) >= 1.5);
}

TEST_CASE("gauss nodes and weights satisfy the classical identities", "[quadrature]") {
  for (int n : {4, 16, 64}) {
    QuadratureRule rule{QuadKind::GaussLegendreTensor, n, 1};
    // sum of weights over [-1,1] is 2 <=> integral of 1
    const double total = integrate1d([](double) { return 1.0; }, -1.0, 1.0, rule);
    CHECK(total == Catch::Approx(2.0).margin(1e-14));
    // odd monomials vanish by symmetry
    const double odd = integrate1d([](double t) { return t * t * t; }, -1.0, 1.0, rule);
    CHECK(std::abs(odd) <= 1e-15);
  }
}

TEST_CASE("oriented integrals flip sign per reversed axis", "[quadrature]") {
  auto g = [](double z1, double z2) { return 1.0 + z1 + z2; };
  const double fwd = integrate2d_oriented(g, 0.0, 1.0, 0.0, 2.0);
  CHECK(integrate2d_oriented(g, 1.0, 0.0, 0.0, 2.0) == Catch::Approx(-fwd));
  CHECK(integrate2d_oriented(g, 1.0, 0.0, 2.0, 0.0) == Catch::Approx(fwd));
  CHECK(integrate2d_oriented(g, 0.0, 0.0, 0.0, 2.0) == 0.0);
  CHECK(integrate1d_oriented([](double t) { return t; }, 2.0, 0.0) == Catch::Approx(-2.0));
}

TEST_CASE("evaluation errors carry the node location", "[quadrature]") {
  try {
    integrate2d(
        [](double z1, double z2) -> double {
          if (z1 > 0.5 && z2 > 0.5) throw EvalError("domain error: synthetic");
          return 1.0;
        },
        CharRectangle{0.0, 1.0, 0.0, 1.0});
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("quadrature node") != std::string::npos);
  }
}

TEST_CASE("rule validation", "[quadrature]") {
  QuadratureRule bad{QuadKind::GaussLegendreTensor, 0, 1};
  CHECK_THROWS_AS(bad.validate(), Error);
  QuadratureRule bad2{QuadKind::GaussLegendreTensor, 65, 1};
  CHECK_THROWS_AS(bad2.validate(), Error);
  QuadratureRule bad3{QuadKind::GaussLegendreTensor, 8, 0};
  CHECK_THROWS_AS(bad3.validate(), Error);
}
