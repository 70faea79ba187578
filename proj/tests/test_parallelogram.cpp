#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ccp/catalog.hpp"
#include "ccp/parallelogram.hpp"

using namespace ccp;

namespace {

CharRectangle random_subrect(const CharRectangle& base, std::mt19937_64& rng,
                             double min_frac = 0.05) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double wmin = min_frac * base.width();
  const double hmin = min_frac * base.height();
  const double w = wmin + u(rng) * (base.width() - wmin);
  const double h = hmin + u(rng) * (base.height() - hmin);
  const double l1 = base.l1 + u(rng) * (base.width() - w);
  const double r1 = base.r1 + u(rng) * (base.height() - h);
  return {l1, l1 + w, r1, r1 + h};
}

}  // namespace

TEST_CASE("vertices follow the labeling convention", "[parallelogram]") {
  SECTION("wave a0 = 1, rect [0,2] x [0,4]") {
    const auto w = catalog::wave(1.0);
    const auto v = vertices({0.0, 2.0, 0.0, 4.0}, w.pair);
    CHECK(v.A.x1 == Catch::Approx(0.0).margin(1e-15));
    CHECK(v.A.x2 == Catch::Approx(0.0).margin(1e-15));
    CHECK(v.B.x1 == Catch::Approx(2.0));
    CHECK(v.B.x2 == Catch::Approx(2.0));
    CHECK(v.C.x1 == Catch::Approx(1.0));
    CHECK(v.C.x2 == Catch::Approx(3.0));
    CHECK(v.D.x1 == Catch::Approx(-1.0));
    CHECK(v.D.x2 == Catch::Approx(1.0));
  }
  SECTION("identity characteristics: vertices are the rectangle corners") {
    const auto id = catalog::dxdy_exp();
    const auto v = vertices({0.1, 0.6, 0.2, 0.9}, id.pair);
    CHECK(v.A == Point{0.1, 0.2});
    CHECK(v.B == Point{0.1, 0.9});
    CHECK(v.C == Point{0.6, 0.9});
    CHECK(v.D == Point{0.6, 0.2});
  }
  SECTION("varspeed rect [0,1] x [2,3]") {
    const auto vs = catalog::varspeed();
    const auto v = vertices({0.0, 1.0, 2.0, 3.0}, vs.pair);
    CHECK(v.A.x1 == Catch::Approx(std::sqrt(2.0)));
    CHECK(v.A.x2 == Catch::Approx(1.0));
    CHECK(v.B.x1 == Catch::Approx(std::sqrt(3.0)));
    CHECK(v.B.x2 == Catch::Approx(1.5));
    CHECK(v.C.x1 == Catch::Approx(std::sqrt(2.0)));
    CHECK(v.C.x2 == Catch::Approx(2.0));
    CHECK(v.D.x1 == Catch::Approx(1.0));
    CHECK(v.D.x2 == Catch::Approx(1.5));
  }
}

TEST_CASE("identity: catalog spot checks", "[parallelogram]") {
  SECTION("wave, f = 0, travelling-wave solution: both sides vanish") {
    const auto w = catalog::wave(1.0);
    const auto rep = identity_residual(w.eq, w.pair, w.manufactured, w.base_rect);
    CHECK(std::abs(rep.lhs) <= 1e-13);
    CHECK(std::abs(rep.rhs) <= 1e-13);
    CHECK(std::abs(rep.residual) <= 1e-13);
  }
  SECTION("mixed-derivative, f = u, u = e^{x1+x2}: closed form (e-1)^2") {
    const auto t = catalog::dxdy_exp();
    const auto rep = identity_residual(t.eq, t.pair, t.manufactured, {0.0, 1.0, 0.0, 1.0});
    const double closed = (std::exp(1.0) - 1.0) * (std::exp(1.0) - 1.0);
    CHECK(rep.lhs == Catch::Approx(closed).margin(1e-12));
    CHECK(rep.rhs == Catch::Approx(closed).margin(1e-12));
    CHECK(std::abs(rep.residual) <= 1e-12);
  }
  SECTION("wave, f = 1, u = x1^2/2 on [0,1]^2: both sides equal -1/4") {
    const auto t = catalog::wave_forced(1.0);
    const auto rep = identity_residual(t.eq, t.pair, t.manufactured, {0.0, 1.0, 0.0, 1.0});
    CHECK(rep.lhs == Catch::Approx(-0.25).margin(1e-13));
    CHECK(rep.rhs == Catch::Approx(-0.25).margin(1e-13));
    CHECK(std::abs(rep.residual) <= 1e-12);
  }
}

TEST_CASE("identity: 50 random sub-rectangles per catalog triple", "[parallelogram]") {
  std::mt19937_64 rng(31415);
  for (const auto& t : catalog::identity_triples()) {
    for (int k = 0; k < 50; ++k) {
      const CharRectangle rect = random_subrect(t.base_rect, rng);
      const auto rep = identity_residual(t.eq, t.pair, t.manufactured, rect);
      INFO(t.name << " rect [" << rect.l1 << "," << rect.l2 << "]x[" << rect.r1 << ","
                  << rect.r2 << "]");
      CHECK(std::abs(rep.residual) <= 1e-10);
    }
  }
}

TEST_CASE("identity: quadrature refinement drives the residual to the floor",
          "[parallelogram]") {
  const auto t = catalog::dxdy_exp();
  double prev = -1.0;
  for (int n : {2, 4, 8, 16}) {
    QuadratureRule rule{QuadKind::GaussLegendreTensor, n, 1};
    const auto rep = identity_residual(t.eq, t.pair, t.manufactured, t.base_rect, rule);
    if (prev >= 0.0) CHECK((std::abs(rep.residual) < prev || std::abs(rep.residual) <= 1e-13));
    prev = std::abs(rep.residual);
  }
  CHECK(prev <= 1e-13);
}

TEST_CASE("identity: vertex relabeling involution leaves the sum unchanged",
          "[parallelogram]") {
  const auto t = catalog::varspeed();
  const CharRectangle rect{0.1, 0.6, 1.4, 1.9};
  const auto v = vertices(rect, t.pair);
  auto u_at = [&](const Point& x) { return t.manufactured.value_at_x(x); };
  const double sum = u_at(v.A) - u_at(v.B) + u_at(v.C) - u_at(v.D);
  // swapping (l1,l2) and (r1,r2) simultaneously maps A<->C, B<->D
  const auto v_swapped = vertices(rect, t.pair);
  const double sum_swapped =
      u_at(v_swapped.C) - u_at(v_swapped.D) + u_at(v_swapped.A) - u_at(v_swapped.B);
  CHECK(sum == Catch::Approx(sum_swapped).margin(1e-15));
}

TEST_CASE("identity: invariance under monotone relabeling of gamma1", "[parallelogram]") {
  const auto w = catalog::wave(1.0);
  const CharRectangle rect{-0.5, 0.7, -0.3, 0.9};
  const auto base = identity_residual(w.eq, w.pair, w.manufactured, rect);

  // q(t) = 2t + 1: transformed pair and correspondingly mapped bounds
  const auto relabeled = CharacteristicPair::analytic(
      "2*(x2 - x1) + 1", "x2 + x1", "(y2 - (y1 - 1)/2)/2", "((y1 - 1)/2 + y2)/2");
  const CharRectangle rect2{2.0 * rect.l1 + 1.0, 2.0 * rect.l2 + 1.0, rect.r1, rect.r2};
  const auto rep2 = identity_residual(w.eq, relabeled, w.manufactured, rect2);
  CHECK(std::abs(rep2.residual - base.residual) <= 1e-10);
  CHECK(rep2.lhs == Catch::Approx(base.lhs).margin(1e-10));
}

TEST_CASE("converse probe: defects of known non-solutions", "[parallelogram]") {
  const std::vector<std::pair<double, double>> sizes{
      {0.2, 0.2}, {0.1, 0.1}, {0.05, 0.05}, {0.025, 0.025}};

  SECTION("wave, f = 0, u = x1^2: defect -1/2") {
    const auto w = catalog::wave(1.0);
    const auto probe =
        converse_probe(w.eq, w.pair, SolutionField::analytic("x1^2"), {0.0, 0.0}, sizes);
    CHECK(probe.extrapolated == Catch::Approx(-0.5).margin(1e-4));
  }
  SECTION("mixed-derivative, f = 0, u = x1 x2: defect 1") {
    auto eq = EquationSpec::parse("0", "0.5", "0", "0");
    const auto id = catalog::dxdy_exp();
    const auto probe =
        converse_probe(eq, id.pair, SolutionField::analytic("x1*x2"), {0.2, 0.2}, sizes);
    CHECK(probe.extrapolated == Catch::Approx(1.0).margin(1e-4));
  }
  SECTION("wave, f = 0, u = x1^3: spatially varying defect -3(r1-l1)/4") {
    const auto w = catalog::wave(1.0);
    const auto probe =
        converse_probe(w.eq, w.pair, SolutionField::analytic("x1^3"), {0.0, 1.0}, sizes);
    CHECK(probe.extrapolated == Catch::Approx(-0.75).margin(1e-4));
  }
}

TEST_CASE("converse probe: true solutions sit at the numerical floor", "[parallelogram]") {
  const std::vector<std::pair<double, double>> sizes{
      {0.2, 0.2}, {0.1, 0.1}, {0.05, 0.05}};
  for (const auto& t : catalog::identity_triples()) {
    const Point corner{t.base_rect.l1 + 0.1 * t.base_rect.width(),
                       t.base_rect.r1 + 0.1 * t.base_rect.height()};
    const auto probe = converse_probe(t.eq, t.pair, t.manufactured, corner, sizes);
    for (const auto& e : probe.entries) {
      INFO(t.name << " size " << e.l);
      CHECK(std::abs(e.scaled_residual) <= 1e-9);
    }
  }
}

TEST_CASE("converse probe: grid-mode fields refuse sub-4-cell parallelograms",
          "[parallelogram]") {
  // sample the wave solution onto a characteristic-coordinate lattice
  const auto w = catalog::wave(1.0);
  const int n = 21;
  std::vector<double> vals;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point y{-1.0 + 2.0 * i / (n - 1.0), -1.0 + 2.0 * j / (n - 1.0)};
      vals.push_back(w.manufactured.value_at_x(w.pair.invert(y)));
    }
  const double h = 2.0 / (n - 1);
  auto grid = std::make_shared<BicubicGrid>(-1.0, h, n, -1.0, h, n, std::move(vals));
  const auto field = SolutionField::grid(grid);

  const std::vector<std::pair<double, double>> too_small{{2.0 * h, 2.0 * h}};
  CHECK_THROWS_AS(converse_probe(w.eq, w.pair, field, {0.0, 0.0}, too_small), Error);

  const std::vector<std::pair<double, double>> ok{{0.8, 0.8}, {0.5, 0.5}};
  const auto probe = converse_probe(w.eq, w.pair, field, {-0.9, -0.9}, ok);
  CHECK(probe.entries.size() == 2);
}

TEST_CASE("grid-mode solution fields track the analytic identity", "[parallelogram]") {
  const auto t = catalog::dxdy_exp();
  const int n = 33;
  std::vector<double> vals;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vals.push_back(std::exp(i / (n - 1.0) + j / (n - 1.0)));
  const double h = 1.0 / (n - 1);
  auto grid = std::make_shared<BicubicGrid>(0.0, h, n, 0.0, h, n, std::move(vals));
  const auto field = SolutionField::grid(grid);
  const auto rep = identity_residual(t.eq, t.pair, field, {0.1, 0.9, 0.1, 0.9});
  const auto exact = identity_residual(t.eq, t.pair, t.manufactured, {0.1, 0.9, 0.1, 0.9});
  // documented grid-mode accuracy is O(h^2)
  CHECK(std::abs(rep.lhs - exact.lhs) <= 10.0 * h * h);
  CHECK(std::abs(rep.residual) <= 10.0 * h * h);
}

TEST_CASE("analytic derivative defect against finite differences", "[parallelogram]") {
  for (const auto& t : catalog::identity_triples()) {
    std::vector<Point> probes;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d1(t.dom.b[0], t.dom.b[1]);
    std::uniform_real_distribution<double> d2(t.dom.b[2], t.dom.b[3]);
    for (int k = 0; k < 30; ++k) probes.push_back({d1(rng), d2(rng)});
    CHECK(t.manufactured.derivative_defect(probes) <= 1e-6);
  }
}

TEST_CASE("identity report serializes to JSON", "[parallelogram]") {
  const auto t = catalog::dxdy_exp();
  const auto rep = identity_residual(t.eq, t.pair, t.manufactured, {0.0, 0.5, 0.0, 0.5});
  const auto j = rep.to_json();
  CHECK(j.contains("lhs"));
  CHECK(j.contains("rhs"));
  CHECK(j.contains("residual"));
  CHECK(j["vertices"]["A"].size() == 2);
  CHECK(j["rect"].size() == 4);
  CHECK(j["lhs"].get<double>() == Catch::Approx(rep.lhs));
}
