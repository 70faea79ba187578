#pragma once

#include <algorithm>
#include <cmath>

namespace ccp {

/// A point in the (x1, x2) plane, or in characteristic coordinates (y1, y2)
/// depending on context.
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double max_abs(const Point& p) {
  return std::max(std::abs(p.x1), std::abs(p.x2));
}

/// A rectangle [l1,l2] x [r1,r2] in characteristic coordinates. The preimage
/// under the coordinate map is a curvilinear characteristic parallelogram.
/// l1 < l2 and r1 < r2 except in shrinking-limit sequences, where degenerate
/// equality is tolerated.
struct CharRectangle {
  double l1 = 0.0;
  double l2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;

  double width() const { return l2 - l1; }
  double height() const { return r2 - r1; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (l1 + l2), 0.5 * (r1 + r2)}; }
};

/// Default numeric tolerances. Values sit well above double rounding and
/// below the discretization error of any grid mode.
struct Tolerances {
  double eps_hyp = 1e-10;    ///< strict-hyperbolicity margin on b^2 - ac
  double tol_char = 1e-8;    ///< residual of the characteristic equation
  double eps_jac = 1e-8;     ///< minimum |det| of the coordinate Jacobian
  double tol_inv = 1e-10;    ///< inverse-map round-trip and Newton residual
  int newton_max_iter = 50;
  int newton_max_damping = 20;
  double picard_tol = 1e-10;
  int max_picard = 200;
  double series_eps = 1e-12;
  double cascade_eps = 1e-14;
};

}  // namespace ccp
