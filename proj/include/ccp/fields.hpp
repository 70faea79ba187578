#pragma once

// Scalar fields of two variables with first and second partial derivatives:
// either an expression with symbolically generated partials, or values on a
// uniform lattice with Catmull-Rom bicubic interpolation (C^1; the second
// derivatives exist piecewise, documented accuracy O(h^2)).

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "ccp/errors.hpp"
#include "ccp/expr.hpp"
#include "ccp/types.hpp"

namespace ccp {

/// A twice-differentiable scalar field on the plane.
class ScalarField2 {
 public:
  virtual ~ScalarField2() = default;
  virtual double value(const Point& x) const = 0;
  /// First partial; axis is 0 or 1.
  virtual double d1(int axis, const Point& x) const = 0;
  /// Second partial d^2/(d axis_a d axis_b).
  virtual double d2(int axis_a, int axis_b, const Point& x) const = 0;
};

/// Expression-backed field; all six partials generated once via diff.
class ExprField2 : public ScalarField2 {
 public:
  explicit ExprField2(Expr f) : f_(std::move(f)) {
    const auto& vars = f_.variables();
    if (vars.size() != 2) throw Error("ExprField2 requires an expression over 2 variables");
    dx_[0] = f_.diff(vars[0]);
    dx_[1] = f_.diff(vars[1]);
    dxx_[0] = dx_[0].diff(vars[0]);
    dxx_[1] = dx_[0].diff(vars[1]);
    dxx_[2] = dx_[1].diff(vars[1]);
  }

  const Expr& expr() const { return f_; }
  const Expr& d1_expr(int axis) const { return dx_[static_cast<std::size_t>(axis)]; }

  double value(const Point& x) const override { return f_.eval({x.x1, x.x2}); }
  double d1(int axis, const Point& x) const override {
    return dx_[static_cast<std::size_t>(axis)].eval({x.x1, x.x2});
  }
  double d2(int a, int b, const Point& x) const override {
    return dxx_[static_cast<std::size_t>(a + b)].eval({x.x1, x.x2});
  }

 private:
  Expr f_;
  std::array<Expr, 2> dx_;
  std::array<Expr, 3> dxx_;  // indexed by a+b: 00, 01/10, 11
};

namespace detail {

/// A cubic segment value with d/ds and d^2/ds^2 (s in grid-index units).
struct Cubic1 {
  double v, d, dd;
};

/// Hermite cubic with endpoint values p1, p2 and tangents m1, m2.
/// With centered-difference tangents this is the Catmull-Rom segment.
inline Cubic1 hermite(double p1, double p2, double m1, double m2, double s) {
  const double c2 = -3.0 * p1 + 3.0 * p2 - 2.0 * m1 - m2;
  const double c3 = 2.0 * p1 - 2.0 * p2 + m1 + m2;
  Cubic1 r;
  r.v = ((c3 * s + c2) * s + m1) * s + p1;
  r.d = (3.0 * c3 * s + 2.0 * c2) * s + m1;
  r.dd = 6.0 * c3 * s + 2.0 * c2;
  return r;
}

}  // namespace detail

/// Values on a uniform lattice with bicubic interpolation: per-cell Hermite
/// with centered-difference tangents (Catmull-Rom) inside and one-sided
/// second-order tangents at the boundary nodes, so the surface is C^1, node
/// values are reproduced exactly, and quadratics are represented without
/// error. Row-major storage: v[i * n2 + j] is the value at
/// (x1_0 + i h1, x2_0 + j h2).
class BicubicGrid : public ScalarField2 {
 public:
  BicubicGrid(double x1_0, double h1, int n1, double x2_0, double h2, int n2,
              std::vector<double> values)
      : x1_0_(x1_0), h1_(h1), n1_(n1), x2_0_(x2_0), h2_(h2), n2_(n2),
        v_(std::move(values)) {
    if (n1_ < 4 || n2_ < 4) throw Error("BicubicGrid requires at least 4 nodes per axis");
    if (v_.size() != static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_))
      throw Error("BicubicGrid: value count does not match lattice dimensions");
    if (h1_ <= 0.0 || h2_ <= 0.0) throw Error("BicubicGrid: spacing must be positive");
  }

  double x1_min() const { return x1_0_; }
  double x1_max() const { return x1_0_ + h1_ * (n1_ - 1); }
  double x2_min() const { return x2_0_; }
  double x2_max() const { return x2_0_ + h2_ * (n2_ - 1); }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double at(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n2_) +
              static_cast<std::size_t>(j)];
  }
  Point node(int i, int j) const { return {x1_0_ + i * h1_, x2_0_ + j * h2_}; }

  double value(const Point& x) const override { return sample(x, 0, 0); }
  double d1(int axis, const Point& x) const override {
    return axis == 0 ? sample(x, 1, 0) : sample(x, 0, 1);
  }
  double d2(int a, int b, const Point& x) const override {
    const int k = a + b;
    return k == 0 ? sample(x, 2, 0) : k == 1 ? sample(x, 1, 1) : sample(x, 0, 2);
  }

 private:
  // Locate the cell containing t; out-of-range queries extrapolate the end
  // cell's cubic.
  void locate(double t, double t0, double h, int n, int& i, double& s) const {
    const double u = (t - t0) / h;
    double fi = std::floor(u);
    fi = std::min(std::max(fi, 0.0), static_cast<double>(n - 2));
    i = static_cast<int>(fi);
    s = u - fi;
  }

  // value/derivatives along one lattice line: fetch(k) returns the k-th node
  template <class Fetch>
  static detail::Cubic1 line_cubic(const Fetch& fetch, int n, int i, double s) {
    const double p1 = fetch(i), p2 = fetch(i + 1);
    const double m1 = i == 0 ? 0.5 * (-3.0 * fetch(0) + 4.0 * fetch(1) - fetch(2))
                             : 0.5 * (fetch(i + 1) - fetch(i - 1));
    const double m2 = i == n - 2
                          ? 0.5 * (3.0 * fetch(n - 1) - 4.0 * fetch(n - 2) + fetch(n - 3))
                          : 0.5 * (fetch(i + 2) - fetch(i));
    return detail::hermite(p1, p2, m1, m2, s);
  }

  double sample(const Point& x, int dx1_order, int dx2_order) const {
    int i, j;
    double s, t;
    locate(x.x1, x1_0_, h1_, n1_, i, s);
    locate(x.x2, x2_0_, h2_, n2_, j, t);
    // interpolate along x2 on the four x1-lines feeding the outer cubic
    auto outer_fetch = [&](int ii) -> double {
      const detail::Cubic1 c =
          line_cubic([&](int jj) { return at(ii, jj); }, n2_, j, t);
      return dx2_order == 0 ? c.v : dx2_order == 1 ? c.d : c.dd;
    };
    const detail::Cubic1 c = line_cubic(outer_fetch, n1_, i, s);
    double r = dx1_order == 0 ? c.v : dx1_order == 1 ? c.d : c.dd;
    for (int k = 0; k < dx1_order; ++k) r /= h1_;
    for (int k = 0; k < dx2_order; ++k) r /= h2_;
    return r;
  }

  double x1_0_, h1_;
  int n1_;
  double x2_0_, h2_;
  int n2_;
  std::vector<double> v_;
};

}  // namespace ccp
