#pragma once

// Built-in problem catalog: the equation / characteristics / manufactured
// solution triples used across the test suites and shipped through the CLI.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "ccp/characteristics.hpp"
#include "ccp/parallelogram.hpp"
#include "ccp/problem.hpp"

namespace ccp::catalog {

struct CatalogTriple {
  std::string name;
  std::string description;
  EquationSpec eq;
  CharacteristicPair pair;
  DomainSpec dom;           ///< x-space sampling domain
  CharRectangle base_rect;  ///< identity tests draw sub-rectangles from here
  SolutionField manufactured;
};

inline std::string fmt(double v) { return detail::format_double(v); }

/// Constant-coefficient wave operator with speed a0 and f == 0; the
/// manufactured solution is a sum of travelling waves.
inline CatalogTriple wave(double a0 = 1.0) {
  CatalogTriple t;
  t.name = "wave";
  t.description = "wave operator, speed " + fmt(a0) + ", homogeneous";
  t.eq = EquationSpec::parse("1", "0", "-" + fmt(a0 * a0), "0");
  t.pair = CharacteristicPair::analytic(
      "x2 - " + fmt(a0) + "*x1", "x2 + " + fmt(a0) + "*x1",
      "(y2 - y1)/" + fmt(2.0 * a0), "(y1 + y2)/2");
  t.dom = DomainSpec::axis_rectangle(-2.0, 2.0, -2.0, 2.0);
  t.base_rect = {-1.0, 1.0, -1.0, 1.0};
  t.manufactured = SolutionField::analytic(
      parse_expr("sin(x2 - " + fmt(a0) + "*x1) + cos(x2 + " + fmt(a0) + "*x1)", kXVars));
  return t;
}

/// Wave operator with f == 1; u = x1^2/2 satisfies it for every speed.
inline CatalogTriple wave_forced(double a0 = 1.0) {
  CatalogTriple t = wave(a0);
  t.name = "wave-forced";
  t.description = "wave operator, speed " + fmt(a0) + ", f = 1";
  t.eq = EquationSpec::parse("1", "0", "-" + fmt(a0 * a0), "1");
  t.manufactured = SolutionField::analytic("x1^2/2");
  return t;
}

/// Pure mixed-derivative operator with the semilinear right side f = u;
/// u = e^{x1+x2} is an exact solution and both identity sides have the
/// closed form (e^{l2}-e^{l1})(e^{r2}-e^{r1}).
inline CatalogTriple dxdy_exp() {
  CatalogTriple t;
  t.name = "dxdy-exp";
  t.description = "mixed-derivative operator, f = u, u = exp(x1+x2)";
  t.eq = EquationSpec::parse("0", "0.5", "0", "u");
  t.pair = CharacteristicPair::analytic("x1", "x2", "y1", "y2");
  t.dom = DomainSpec::axis_rectangle(0.0, 1.0, 0.0, 1.0);
  t.base_rect = {0.0, 1.0, 0.0, 1.0};
  t.manufactured = SolutionField::analytic("exp(x1 + x2)");
  return t;
}

/// Variable-speed operator c = -x1^2 on x1 > 0 with parabolic
/// characteristics; f is manufactured from u = x1 x2 + x2^2.
inline CatalogTriple varspeed() {
  CatalogTriple t;
  t.name = "varspeed";
  t.description = "variable speed c = -x1^2, manufactured u = x1*x2 + x2^2";
  t.eq = EquationSpec::parse("1", "0", "-x1^2", "-2*x1^2");
  t.pair = CharacteristicPair::analytic("x2 - x1^2/2", "x2 + x1^2/2",
                                        "sqrt(y2 - y1)", "(y1 + y2)/2");
  t.dom = DomainSpec::axis_rectangle(0.5, 1.5, 0.5, 1.5);
  t.base_rect = {0.0, 0.75, 1.25, 2.0};
  t.manufactured = SolutionField::analytic("x1*x2 + x2^2");
  return t;
}

/// The three triples behind the identity acceptance checks.
inline std::vector<CatalogTriple> identity_triples() {
  return {wave(1.0), dxdy_exp(), varspeed()};
}

/// Every expression in the catalog with a box that keeps evaluation inside
/// all function domains, for derivative-vs-finite-difference sweeps.
struct RangedExpr {
  std::string origin;
  Expr expr;
  std::vector<std::pair<double, double>> ranges;  ///< one per declared variable
};

inline std::vector<RangedExpr> all_expressions() {
  std::vector<RangedExpr> out;
  auto add2 = [&out](const std::string& origin, const Expr& e, double lo, double hi) {
    out.push_back({origin, e, {{lo, hi}, {lo, hi}}});
  };
  auto add5 = [&out](const std::string& origin, const Expr& e) {
    out.push_back({origin, e,
                   {{0.5, 1.5}, {0.5, 1.5}, {-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}}});
  };
  for (const CatalogTriple& t : {wave(1.0), wave(2.0), wave_forced(1.0), dxdy_exp(),
                                 varspeed()}) {
    add2(t.name + ".a", t.eq.a, 0.5, 1.5);
    add2(t.name + ".b", t.eq.b, 0.5, 1.5);
    add2(t.name + ".c", t.eq.c, 0.5, 1.5);
    add5(t.name + ".f", t.eq.f);
  }
  const CatalogTriple vs = varspeed();
  add2("varspeed.gamma1", parse_expr("x2 - x1^2/2", kXVars), 0.5, 1.5);
  add2("varspeed.gamma2", parse_expr("x2 + x1^2/2", kXVars), 0.5, 1.5);
  out.push_back({"varspeed.inv_x1", parse_expr("sqrt(y2 - y1)", kYVars),
                 {{0.0, 0.7}, {1.3, 2.0}}});
  add2("varspeed.inv_x2", parse_expr("(y1 + y2)/2", kYVars), 0.0, 2.0);
  add2("wave.gamma1", parse_expr("x2 - x1", kXVars), -2.0, 2.0);
  add2("wave.gamma2", parse_expr("x2 + x1", kXVars), -2.0, 2.0);
  add2("wave.u", parse_expr("sin(x2 - x1) + cos(x2 + x1)", kXVars), -2.0, 2.0);
  add2("dxdy.u", parse_expr("exp(x1 + x2)", kXVars), 0.0, 1.0);
  add2("varspeed.u", parse_expr("x1*x2 + x2^2", kXVars), 0.5, 1.5);
  out.push_back({"mixed.phi", parse_expr("t^2", {"t"}), {{0.0, 3.0}}});
  out.push_back({"mixed.mu", parse_expr("t^2", {"t"}), {{0.0, 3.0}}});
  out.push_back({"goursat.phi1", parse_expr("2*t^3", {"t"}), {{0.0, 2.0}}});
  out.push_back({"goursat.phi2", parse_expr("-2*t^3", {"t"}), {{0.0, 2.0}}});
  out.push_back({"picard.u", parse_expr("exp(x1 + x2)", kXVars), {{0.0, 1.0}, {0.0, 1.0}}});
  return out;
}

}  // namespace ccp::catalog
