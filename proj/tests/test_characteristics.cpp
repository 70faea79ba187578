#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccp/catalog.hpp"
#include "ccp/characteristics.hpp"

using namespace ccp;

TEST_CASE("validate: wave pair has zero residual and Jacobian -2", "[characteristics]") {
  const auto t = catalog::wave(1.0);
  const auto rep = validate_characteristics(t.eq, t.pair, t.dom, 11);
  CHECK(rep.pass);
  CHECK(rep.max_char_residual <= 1e-14);
  CHECK(t.pair.forward_jacobian({0.3, 0.4}).det() == Catch::Approx(-2.0));
}

TEST_CASE("validate: identity pair for the mixed-derivative operator", "[characteristics]") {
  const auto t = catalog::dxdy_exp();
  const auto rep = validate_characteristics(t.eq, t.pair, t.dom, 11);
  CHECK(rep.pass);
  CHECK(rep.max_char_residual <= 1e-15);
  CHECK(rep.min_abs_jacobian == Catch::Approx(1.0));
}

TEST_CASE("validate: wrong pair against the wave operator fails", "[characteristics]") {
  const auto eq = EquationSpec::parse("1", "0", "-1", "0");
  const auto wrong = CharacteristicPair::analytic("x1", "x2", "y1", "y2");
  const auto dom = DomainSpec::axis_rectangle(0.0, 1.0, 0.0, 1.0);
  const auto rep = validate_characteristics(eq, wrong, dom, 5);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_char_residual == Catch::Approx(1.0));  // |a * 1^2| for gamma1
}

TEST_CASE("validate: catalog passes wholesale", "[characteristics]") {
  for (const auto& t : catalog::identity_triples()) {
    const auto rep = validate_characteristics(t.eq, t.pair, t.dom, 9);
    INFO(t.name << ": " << rep.summary());
    CHECK(rep.pass);
  }
}

TEST_CASE("invert: analytic closed forms", "[characteristics]") {
  const auto w2 = catalog::wave(2.0);
  const Point x = w2.pair.invert({0.0, 4.0});
  CHECK(x.x1 == Catch::Approx(1.0));
  CHECK(x.x2 == Catch::Approx(2.0));

  const auto id = catalog::dxdy_exp();
  const Point y = id.pair.invert({3.0, 5.0});
  CHECK(y.x1 == 3.0);
  CHECK(y.x2 == 5.0);

  const auto vs = catalog::varspeed();
  const Point v = vs.pair.invert({0.0, 2.0});
  CHECK(v.x1 == Catch::Approx(std::sqrt(2.0)));
  CHECK(v.x2 == Catch::Approx(1.0));
}

TEST_CASE("invert: damped Newton with the symbolic Jacobian", "[characteristics]") {
  // same varspeed characteristics but without the closed-form inverse
  const auto vs = catalog::varspeed();
  const auto pair = CharacteristicPair::newton(parse_expr("x2 - x1^2/2", kXVars),
                                               parse_expr("x2 + x1^2/2", kXVars), vs.dom);
  const Point x = pair.invert({0.0, 2.0});
  CHECK(x.x1 == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(x.x2 == Catch::Approx(1.0).epsilon(1e-9));

  // agreement with the closed form across the base rectangle
  for (double l : {0.1, 0.4, 0.7})
    for (double r : {1.3, 1.6, 1.9}) {
      const Point a = pair.invert({l, r});
      const Point b = vs.pair.invert({l, r});
      CHECK(a.x1 == Catch::Approx(b.x1).margin(1e-8));
      CHECK(a.x2 == Catch::Approx(b.x2).margin(1e-8));
    }
}

TEST_CASE("invert: Newton reports non-convergence with its last iterate",
          "[characteristics]") {
  const auto vs = catalog::varspeed();
  const auto pair = CharacteristicPair::newton(parse_expr("x2 - x1^2/2", kXVars),
                                               parse_expr("x2 + x1^2/2", kXVars), vs.dom);
  // y2 - y1 < 0 has no real preimage for these characteristics
  CHECK_THROWS_AS(pair.invert({2.0, 0.0}), NewtonError);
}

TEST_CASE("inverse round-trip over catalog rectangles", "[characteristics]") {
  for (const auto& t : catalog::identity_triples()) {
    const double defect = inverse_roundtrip_defect(t.pair, t.base_rect, 21);
    INFO(t.name);
    CHECK(defect <= 1e-10);
  }
}

TEST_CASE("relabeling gamma1 leaves the vertex set unchanged", "[characteristics]") {
  const auto w = catalog::wave(1.0);
  const CharRectangle rect{-0.5, 0.7, -0.3, 0.9};
  const Point A = w.pair.invert({rect.l1, rect.r1});
  const Point B = w.pair.invert({rect.l1, rect.r2});
  const Point C = w.pair.invert({rect.l2, rect.r2});
  const Point D = w.pair.invert({rect.l2, rect.r1});

  SECTION("affine relabeling q(t) = 2t + 1, analytic inverse") {
    // gamma1' = q(gamma1); bounds map to [q(l1), q(l2)] (already ordered)
    const auto relabeled = CharacteristicPair::analytic(
        "2*(x2 - x1) + 1", "x2 + x1", "(y2 - (y1 - 1)/2)/2", "((y1 - 1)/2 + y2)/2");
    const CharRectangle rect2{2.0 * rect.l1 + 1.0, 2.0 * rect.l2 + 1.0, rect.r1, rect.r2};
    const Point A2 = relabeled.invert({rect2.l1, rect2.r1});
    const Point C2 = relabeled.invert({rect2.l2, rect2.r2});
    CHECK(A2.x1 == Catch::Approx(A.x1).margin(1e-10));
    CHECK(A2.x2 == Catch::Approx(A.x2).margin(1e-10));
    CHECK(C2.x1 == Catch::Approx(C.x1).margin(1e-10));
    CHECK(C2.x2 == Catch::Approx(C.x2).margin(1e-10));
  }

  SECTION("cubic relabeling q(t) = t^3 + t, Newton inverse") {
    const auto relabeled = CharacteristicPair::newton(
        parse_expr("(x2 - x1)^3 + (x2 - x1)", kXVars), parse_expr("x2 + x1", kXVars),
        w.dom, 15);
    auto q = [](double t) { return t * t * t + t; };
    const CharRectangle rect2{q(rect.l1), q(rect.l2), rect.r1, rect.r2};
    const Point B2 = relabeled.invert({rect2.l1, rect2.r2});
    const Point D2 = relabeled.invert({rect2.l2, rect2.r1});
    CHECK(B2.x1 == Catch::Approx(B.x1).margin(1e-9));
    CHECK(B2.x2 == Catch::Approx(B.x2).margin(1e-9));
    CHECK(D2.x1 == Catch::Approx(D.x1).margin(1e-9));
    CHECK(D2.x2 == Catch::Approx(D.x2).margin(1e-9));
  }
}

TEST_CASE("trace: wave characteristics are reproduced to roundoff", "[characteristics]") {
  // constant slopes: RK4 integrates them exactly, and the labels are linear
  // fields that bicubic interpolation represents exactly
  const auto w = catalog::wave(1.0);
  const auto dom = DomainSpec::axis_rectangle(0.0, 1.0, 0.0, 1.0);
  TraceConfig cfg;
  cfg.levels = {-1.0, -0.5, 0.0, 0.5, 1.0};
  cfg.rk_step = 1.0 / 16.0;
  const auto traced = trace_characteristics(w.eq, dom, cfg);
  double worst = 0.0;
  for (double x1 : {0.05, 0.37, 0.61, 0.93})
    for (double x2 : {0.11, 0.42, 0.78, 0.97}) {
      const Point x{x1, x2};
      worst = std::max(worst, std::abs(traced.pair.gamma1().value(x) - (x2 - x1)));
      worst = std::max(worst, std::abs(traced.pair.gamma2().value(x) - (x2 + x1)));
    }
  CHECK(worst <= 1e-12);
  CHECK(traced.report.max_level_mismatch <= 1e-12);

  // the grid-backed inverse map honors the round-trip contract
  const double defect = inverse_roundtrip_defect(traced.pair, {-0.4, 0.3, 0.4, 1.2}, 11);
  CHECK(defect <= 1e-9);
}

TEST_CASE("trace: quadratic first integrals (c = -x1^2) are exact", "[characteristics]") {
  // slope +-x1 is degree 1 in the march variable: RK4 quadrature is exact,
  // and the quadratic labels are reproduced by the cubic interpolant
  const auto vs = catalog::varspeed();
  const auto dom = DomainSpec::axis_rectangle(0.5, 1.5, 0.5, 1.5);
  TraceConfig cfg;
  cfg.rk_step = 1.0 / 32.0;
  const auto traced = trace_characteristics(vs.eq, dom, cfg);
  // seed-coordinate labels are the first integrals normalized on the seed
  // line x1 = 0.5, i.e. x2 -+ (x1^2/2 - 1/8)
  const double shift = 0.125;  // 0.5^2 / 2
  double worst = 0.0;
  for (double x1 : {0.55, 0.87, 1.21, 1.43})
    for (double x2 : {0.61, 0.92, 1.18, 1.37}) {
      const Point x{x1, x2};
      worst = std::max(worst, std::abs(traced.pair.gamma1().value(x) -
                                       (x2 - 0.5 * x1 * x1 + shift)));
      worst = std::max(worst, std::abs(traced.pair.gamma2().value(x) -
                                       (x2 + 0.5 * x1 * x1 - shift)));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("trace: RK4 order on a variable-speed wave", "[characteristics]") {
  // speed e^{x1}: labels are x2 -+ (e^{x1} - 1), so the march has a genuine
  // h^4 error; compare at lattice nodes (no interpolation error involved)
  const auto eq = EquationSpec::parse("1", "0", "-exp(2*x1)", "0");
  const auto dom = DomainSpec::axis_rectangle(0.0, 1.0, 0.0, 3.0);
  auto max_err = [&](double h) {
    TraceConfig cfg;
    cfg.rk_step = h;
    cfg.grid_n1 = 9;
    cfg.grid_n2 = 9;
    const auto traced = trace_characteristics(eq, dom, cfg);
    double worst = 0.0;
    for (int i = 0; i < traced.gamma1_grid->n1(); ++i)
      for (int j = 0; j < traced.gamma1_grid->n2(); ++j) {
        const Point x = traced.gamma1_grid->node(i, j);
        const double exact1 = x.x2 - (std::exp(x.x1) - 1.0);
        const double exact2 = x.x2 + (std::exp(x.x1) - 1.0);
        worst = std::max(worst, std::abs(traced.gamma1_grid->at(i, j) - exact1));
        worst = std::max(worst, std::abs(traced.gamma2_grid->at(i, j) - exact2));
      }
    return worst;
  };
  const double e1 = max_err(1.0 / 8.0);
  const double e2 = max_err(1.0 / 16.0);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
}

TEST_CASE("trace: input validation and CSV export", "[characteristics]") {
  const auto w = catalog::wave(1.0);
  CHECK_THROWS_AS(
      trace_characteristics(w.eq, DomainSpec::sector(0.5, 2.0, 0.0, 1.0), TraceConfig{}),
      Error);
  TraceConfig bad;
  bad.rk_step = 0.0;
  CHECK_THROWS_AS(trace_characteristics(w.eq, DomainSpec::axis_rectangle(0, 1, 0, 1), bad),
                  Error);

  TraceConfig cfg;
  cfg.grid_n1 = 5;
  cfg.grid_n2 = 4;
  cfg.rk_step = 0.25;
  const auto traced =
      trace_characteristics(w.eq, DomainSpec::axis_rectangle(0, 1, 0, 1), cfg);
  std::ostringstream os;
  write_trace_csv(traced, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("x1,x2,gamma1,gamma2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5 * 4);
}
