#pragma once

// The semilinear second-order equation
//   a u_x1x1 + 2 b u_x1x2 + c u_x2x2 = f(x1, x2, u, u_x1, u_x2)
// on one of four supported domain kinds, with strict-hyperbolicity checking
// and the two-family factorization of the characteristic ODE
//   a (dx2)^2 - 2 b dx1 dx2 + c (dx1)^2 = 0.

#include <cmath>
#include <string>
#include <vector>

#include "ccp/errors.hpp"
#include "ccp/expr.hpp"
#include "ccp/types.hpp"

namespace ccp {

inline const std::vector<std::string> kXVars = {"x1", "x2"};
inline const std::vector<std::string> kYVars = {"y1", "y2"};
inline const std::vector<std::string> kFVars = {"x1", "x2", "u", "p", "q"};

/// Coefficients of the principal part (over x1, x2) and the semilinear
/// right-hand side f (over x1, x2, u, p, q) where p = u_x1, q = u_x2.
struct EquationSpec {
  Expr a, b, c;  ///< over (x1, x2)
  Expr f;        ///< over (x1, x2, u, p, q)

  double a_at(const Point& x) const { return a.eval({x.x1, x.x2}); }
  double b_at(const Point& x) const { return b.eval({x.x1, x.x2}); }
  double c_at(const Point& x) const { return c.eval({x.x1, x.x2}); }
  double f_at(const Point& x, double u, double p, double q) const {
    return f.eval({x.x1, x.x2, u, p, q});
  }
  /// Discriminant b^2 - a c of the principal part.
  double discriminant_at(const Point& x) const {
    const double bv = b_at(x);
    return bv * bv - a_at(x) * c_at(x);
  }

  static EquationSpec parse(const std::string& a, const std::string& b,
                            const std::string& c, const std::string& f) {
    return {parse_expr(a, kXVars), parse_expr(b, kXVars), parse_expr(c, kXVars),
            parse_expr(f, kFVars)};
  }
};

enum class DomainKind {
  AxisRectangle,   ///< [b0,b1] x [b2,b3] in (x1, x2)
  CharRectangle,   ///< [b0,b1] x [b2,b3] in characteristic coordinates
  Sector,          ///< alpha = b0, beta = b1, x1 in [b2, b3]; alpha x1 <= x2 <= beta x1
  Quadrant,        ///< x1 >= 0, x2 >= 0; sampled on [0,b0] x [0,b1]
};

/// A problem domain. Membership is closed (boundaries included) since the
/// boundary-value problems impose data on the boundary.
struct DomainSpec {
  DomainKind kind = DomainKind::AxisRectangle;
  double b[4] = {0.0, 1.0, 0.0, 1.0};

  void validate() const {
    switch (kind) {
      case DomainKind::AxisRectangle:
      case DomainKind::CharRectangle:
        if (!(b[0] < b[1] && b[2] < b[3]))
          throw Error("domain: bounds must be ordered (lower < upper per axis)");
        break;
      case DomainKind::Sector:
        if (!(0.0 < b[0] && b[0] < 1.0 && 1.0 < b[1]))
          throw Error("domain: sector slopes must satisfy 0 < alpha < 1 < beta");
        if (!(0.0 <= b[2] && b[2] < b[3]))
          throw Error("domain: sector x1 range must satisfy 0 <= lo < hi");
        break;
      case DomainKind::Quadrant:
        if (!(b[0] > 0.0 && b[1] > 0.0))
          throw Error("domain: quadrant sampling box extents must be positive");
        break;
    }
  }

  bool contains(const Point& x) const {
    switch (kind) {
      case DomainKind::AxisRectangle:
        return x.x1 >= b[0] && x.x1 <= b[1] && x.x2 >= b[2] && x.x2 <= b[3];
      case DomainKind::CharRectangle:
        return true;  // membership is decided in characteristic coordinates
      case DomainKind::Sector:
        return x.x1 >= 0.0 && b[0] * x.x1 <= x.x2 && x.x2 <= b[1] * x.x1;
      case DomainKind::Quadrant:
        return x.x1 >= 0.0 && x.x2 >= 0.0;
    }
    return false;
  }

  static DomainSpec axis_rectangle(double x1_lo, double x1_hi, double x2_lo, double x2_hi) {
    DomainSpec d{DomainKind::AxisRectangle, {x1_lo, x1_hi, x2_lo, x2_hi}};
    d.validate();
    return d;
  }
  static DomainSpec char_rectangle(double y1_lo, double y1_hi, double y2_lo, double y2_hi) {
    DomainSpec d{DomainKind::CharRectangle, {y1_lo, y1_hi, y2_lo, y2_hi}};
    d.validate();
    return d;
  }
  static DomainSpec sector(double alpha, double beta, double x1_lo, double x1_hi) {
    DomainSpec d{DomainKind::Sector, {alpha, beta, x1_lo, x1_hi}};
    d.validate();
    return d;
  }
  static DomainSpec quadrant(double x1_hi, double x2_hi) {
    DomainSpec d{DomainKind::Quadrant, {x1_hi, x2_hi, 0.0, 0.0}};
    d.validate();
    return d;
  }
};

/// n x n tensor sample of the domain, corners included. CharRectangle
/// domains sample in characteristic coordinates; callers that need x-space
/// points there must map through an inverse, so this returns the raw grid.
inline std::vector<Point> sample_points(const DomainSpec& dom, int n) {
  if (n < 1) throw Error("sample_points: n must be >= 1");
  dom.validate();
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  auto lerp = [](double a, double b, int i, int m) {
    return m == 0 ? a : a + (b - a) * static_cast<double>(i) / m;
  };
  const int m = std::max(1, n - 1);
  switch (dom.kind) {
    case DomainKind::AxisRectangle:
    case DomainKind::CharRectangle:
    case DomainKind::Quadrant: {
      const double x1lo = dom.kind == DomainKind::Quadrant ? 0.0 : dom.b[0];
      const double x1hi = dom.kind == DomainKind::Quadrant ? dom.b[0] : dom.b[1];
      const double x2lo = dom.kind == DomainKind::Quadrant ? 0.0 : dom.b[2];
      const double x2hi = dom.kind == DomainKind::Quadrant ? dom.b[1] : dom.b[3];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          pts.push_back({lerp(x1lo, x1hi, i, m), lerp(x2lo, x2hi, j, m)});
      if (n == 1) {
        pts.push_back({x1hi, x2lo});
        pts.push_back({x1lo, x2hi});
        pts.push_back({x1hi, x2hi});
      }
      break;
    }
    case DomainKind::Sector: {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double x1 = lerp(dom.b[2], dom.b[3], i, m);
          const double s = lerp(dom.b[0], dom.b[1], j, m);
          pts.push_back({x1, s * x1});
        }
      break;
    }
  }
  return pts;
}

struct HyperbolicityReport {
  bool pass = false;
  double min_discriminant = 0.0;
  Point witness;  ///< where the minimum is attained
  double eps_hyp = 0.0;

  std::string summary() const {
    return std::string(pass ? "pass" : "FAIL") +
           ": min discriminant = " + std::to_string(min_discriminant) + " at (" +
           std::to_string(witness.x1) + ", " + std::to_string(witness.x2) + ")";
  }
};

/// Sample b^2 - ac over an n x n grid (corners included) and report the
/// minimum with its location. Passes iff min >= eps_hyp.
inline HyperbolicityReport check_hyperbolicity(const EquationSpec& eq, const DomainSpec& dom,
                                               int n_samples, double eps_hyp = 1e-10) {
  if (dom.kind == DomainKind::CharRectangle)
    throw Error("check_hyperbolicity: characteristic-rectangle domains must be sampled "
                "through an inverse map; use an axis-rectangle covering the image");
  HyperbolicityReport rep;
  rep.eps_hyp = eps_hyp;
  bool first = true;
  for (const Point& x : sample_points(dom, n_samples)) {
    const double d = eq.discriminant_at(x);
    if (first || d < rep.min_discriminant) {
      rep.min_discriminant = d;
      rep.witness = x;
      first = false;
    }
  }
  rep.pass = !first && rep.min_discriminant >= eps_hyp;
  return rep;
}

/// The two characteristic direction fields at a point.
enum class SlopeForm {
  Dx2OverDx1,   ///< a != 0: dx2/dx1 = (b +- sqrt(b^2-ac)) / a
  Dx1OverDx2,   ///< a == 0, c != 0: dx1/dx2 = (b +- sqrt(b^2-ac)) / c
  AxisAligned,  ///< a == c == 0: the families dx1 = 0 and dx2 = 0
};

struct CharDirections {
  SlopeForm form;
  /// Family 1 always takes the "+" root so the pairing with gamma1 is
  /// deterministic across calls.
  double slope1 = 0.0;
  double slope2 = 0.0;
};

inline CharDirections factor_characteristic_ode(const EquationSpec& eq, const Point& x,
                                                double eps_hyp = 1e-10) {
  const double a = eq.a_at(x);
  const double b = eq.b_at(x);
  const double c = eq.c_at(x);
  const double disc = b * b - a * c;
  if (disc < eps_hyp)
    throw DegeneracyError("factor_characteristic_ode: non-hyperbolic point, discriminant = " +
                              std::to_string(disc),
                          x.x1, x.x2);
  const double root = std::sqrt(disc);
  if (a != 0.0) return {SlopeForm::Dx2OverDx1, (b + root) / a, (b - root) / a};
  if (c != 0.0) return {SlopeForm::Dx1OverDx2, (b + root) / c, (b - root) / c};
  return {SlopeForm::AxisAligned, 0.0, 0.0};
}

}  // namespace ccp
