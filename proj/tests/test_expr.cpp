#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ccp/expr.hpp"

using ccp::Expr;
using ccp::parse_expr;

namespace {

double fd_central(const Expr& e, std::vector<double> at, std::size_t var, double h = 1e-5) {
  auto hi = at, lo = at;
  hi[var] += h;
  lo[var] -= h;
  return (e.eval(hi) - e.eval(lo)) / (2.0 * h);
}

}  // namespace

TEST_CASE("parse and evaluate basic expressions", "[expr]") {
  const Expr wave = parse_expr("x2 - 1*x1", {"x1", "x2"});
  CHECK(wave.eval({1.0, 3.0}) == 2.0);

  const Expr zero = parse_expr("0", {});
  CHECK(zero.is_constant(0.0));

  CHECK(parse_expr("x2 - 2*x1", {"x1", "x2"}).eval({1.0, 3.0}) == 1.0);
  CHECK(parse_expr("exp(y1+y2)", {"y1", "y2"}).eval({0.0, 0.0}) == 1.0);
}

TEST_CASE("precedence and associativity", "[expr]") {
  CHECK(parse_expr("2+3*4", {}).eval({}) == 14.0);
  CHECK(parse_expr("2*3+4", {}).eval({}) == 10.0);
  CHECK(parse_expr("(2+3)*4", {}).eval({}) == 20.0);
  CHECK(parse_expr("2-3-4", {}).eval({}) == -5.0);
  CHECK(parse_expr("2/4/2", {}).eval({}) == 0.25);
  CHECK(parse_expr("2^3^2", {}).eval({}) == 512.0);  // right-associative
  CHECK(parse_expr("-2^2", {}).eval({}) == -4.0);    // ^ binds tighter than unary -
  CHECK(parse_expr("-x^2", {"x"}).eval({3.0}) == -9.0);
  CHECK(parse_expr("x^-1", {"x"}).eval({4.0}) == 0.25);
  CHECK(parse_expr("2*-3", {}).eval({}) == -6.0);
  CHECK(parse_expr("pi", {}).eval({}) == Catch::Approx(3.14159265358979).epsilon(1e-14));
  CHECK(parse_expr("e", {}).eval({}) == Catch::Approx(2.71828182845905).epsilon(1e-14));
}

TEST_CASE("parse errors carry offsets and hints", "[expr]") {
  try {
    parse_expr("x1 +", {"x1"});
    FAIL("expected ParseError");
  } catch (const ccp::ParseError& e) {
    CHECK(e.offset() == 4);
  }

  try {
    parse_expr("x1 + foo", {"x1"});
    FAIL("expected ParseError");
  } catch (const ccp::ParseError& e) {
    CHECK(e.offset() == 5);
    CHECK(std::string(e.what()).find("x1") != std::string::npos);  // lists declared vars
  }

  CHECK_THROWS_AS(parse_expr("", {}), ccp::ParseError);
  CHECK_THROWS_AS(parse_expr("(x1", {"x1"}), ccp::ParseError);
  CHECK_THROWS_AS(parse_expr("sin x1", {"x1"}), ccp::ParseError);
  CHECK_THROWS_AS(parse_expr("x1 x2", {"x1", "x2"}), ccp::ParseError);
}

TEST_CASE("domain-evaluation errors instead of silent NaN", "[expr]") {
  CHECK_THROWS_AS(parse_expr("sqrt(y2-y1)", {"y1", "y2"}).eval({2.0, 1.0}), ccp::EvalError);
  CHECK_THROWS_AS(parse_expr("1/x", {"x"}).eval({0.0}), ccp::EvalError);
  CHECK_THROWS_AS(parse_expr("log(x)", {"x"}).eval({0.0}), ccp::EvalError);
  CHECK_THROWS_AS(parse_expr("log(x)", {"x"}).eval({-1.0}), ccp::EvalError);
  CHECK_THROWS_AS(parse_expr("x^0.5", {"x"}).eval({-2.0}), ccp::EvalError);
  CHECK_THROWS_AS(parse_expr("x^-1", {"x"}).eval({0.0}), ccp::EvalError);
  CHECK_THROWS_AS(parse_expr("exp(x)", {"x"}).eval({1e6}), ccp::EvalError);  // overflow
}

TEST_CASE("missing bindings are reported", "[expr]") {
  const Expr e = parse_expr("x1 + x2", {"x1", "x2"});
  std::map<std::string, double> env{{"x1", 1.0}};
  CHECK_THROWS_AS(e.eval(env), ccp::EvalError);
  env["x2"] = 2.0;
  CHECK(e.eval(env) == 3.0);
  // a declared but unused variable needs no binding
  const Expr f = parse_expr("x1", {"x1", "x2"});
  CHECK(f.eval(std::map<std::string, double>{{"x1", 5.0}}) == 5.0);
}

TEST_CASE("diff folds constants and applies the chain rule", "[expr]") {
  const Expr lin = parse_expr("x2 - 2*x1", {"x1", "x2"});
  const Expr d = lin.diff("x1");
  CHECK(d.is_constant(-2.0));

  const Expr prod = parse_expr("sin(x1)*x2", {"x1", "x2"});
  const Expr dp = prod.diff("x1");
  CHECK(dp.eval({0.5, 2.0}) == Catch::Approx(std::cos(0.5) * 2.0).epsilon(1e-15));
  CHECK(dp.to_string() == "cos(x1)*x2");

  CHECK_THROWS_AS(lin.diff("t"), ccp::EvalError);  // not declared
}

TEST_CASE("diff agrees with central finite differences", "[expr]") {
  const std::vector<std::string> sources = {
      "x1^2*x2 + sin(x1*x2)",
      "exp(x1+x2)/(1+x1^2)",
      "sqrt(x1^2+x2^2+1)",
      "tanh(x1)*cos(x2) - log(2+x1)",
      "x1^x2",
      "abs(x1)*x2^3",
      "(x1 - x2)^3 / (2 + cos(x1))",
  };
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(0.2, 1.8);
  for (const auto& src : sources) {
    const Expr e = parse_expr(src, {"x1", "x2"});
    const Expr d1 = e.diff("x1");
    const Expr d2 = e.diff("x2");
    for (int k = 0; k < 100; ++k) {
      const std::vector<double> at{dist(rng), dist(rng)};
      const double scale1 = std::max(1.0, std::abs(d1.eval(at)));
      const double scale2 = std::max(1.0, std::abs(d2.eval(at)));
      CHECK(std::abs(d1.eval(at) - fd_central(e, at, 0)) / scale1 <= 1e-6);
      CHECK(std::abs(d2.eval(at) - fd_central(e, at, 1)) / scale2 <= 1e-6);
    }
  }
}

TEST_CASE("diff is linear", "[expr]") {
  const Expr e1 = parse_expr("sin(x1*x2)", {"x1", "x2"});
  const Expr e2 = parse_expr("x1^3 + x2", {"x1", "x2"});
  const Expr alpha = ccp::Expr::constant(2.5, {"x1", "x2"});
  const Expr beta = ccp::Expr::constant(-1.25, {"x1", "x2"});
  const Expr combo = alpha * e1 + beta * e2;
  const Expr d_combo = combo.diff("x1");
  const Expr d_split = alpha * e1.diff("x1") + beta * e2.diff("x1");
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const std::vector<double> at{dist(rng), dist(rng)};
    CHECK(d_combo.eval(at) == Catch::Approx(d_split.eval(at)).margin(1e-12));
  }
}

TEST_CASE("print then re-parse evaluates identically", "[expr]") {
  const std::vector<std::string> sources = {
      "x1^2*x2 + sin(x1*x2)",
      "-x1^2",
      "(x1+x2)^3 - x1/(x2+4)",
      "2^3^2 - x1*-2",
      "exp(-(x1-x2)^2)",
      "sqrt(abs(x1))*tanh(x2)",
      "1/(2+cos(x1))/(3+x2)",
      "x1 - (x2 - 1) - 2",
  };
  std::mt19937_64 rng(999);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (const auto& src : sources) {
    const Expr e = parse_expr(src, {"x1", "x2"});
    const Expr r = parse_expr(e.to_string(), {"x1", "x2"});
    for (int k = 0; k < 100; ++k) {
      const std::vector<double> at{dist(rng), dist(rng)};
      // printing preserves the tree shape, so evaluation is bit-identical
      CHECK(e.eval(at) == r.eval(at));
    }
  }
}

TEST_CASE("substitute composes expressions", "[expr]") {
  const Expr q = parse_expr("2*t + 1", {"t"});
  const Expr gamma = parse_expr("x2 - x1", {"x1", "x2"});
  const Expr composed = q.substitute("t", gamma);
  CHECK(composed.eval({1.0, 4.0}) == 7.0);
  CHECK(composed.variables() == std::vector<std::string>{"x1", "x2"});

  // remapping same-named variables across sets
  const Expr inv = parse_expr("(y2 - y1)/2", {"y1", "y2"});
  const Expr qinv = parse_expr("(y1 - 1)/2", {"y1", "y2"});
  const Expr remapped = inv.substitute("y1", qinv);
  CHECK(remapped.eval({3.0, 5.0}) == Catch::Approx((5.0 - 1.0) / 2.0));
}
