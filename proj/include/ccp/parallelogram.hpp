#pragma once

// The curvilinear characteristic parallelogram: vertex construction, both
// sides of the identity
//   u(A) - u(B) + u(C) - u(D) = int_{l1}^{l2} int_{r1}^{r2} Ktilde dz2 dz1
// with vertex labels A=(l1,r1), B=(l1,r2), C=(l2,r2), D=(l2,r1), and the
// shrinking-parallelogram converse probe that estimates the pointwise PDE
// defect from residuals scaled by 1/(l*r).

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ccp/characteristics.hpp"
#include "ccp/kernel.hpp"
#include "ccp/quadrature.hpp"
#include "ccp/types.hpp"

#include "json.hpp"

namespace ccp {

/// A candidate solution u with its partial derivatives. Modes:
///  - analytic: u, u_x1, u_x2 as expressions over (x1, x2) (derivatives
///    generated via diff when omitted);
///  - grid: samples of v(y) = u(x(y)) on a characteristic-coordinate lattice
///    with bicubic interpolation; x-derivatives via the chain rule through
///    the coordinate Jacobian;
///  - callable: u supplied as a function of x (e.g. a pointwise solver),
///    derivatives by central differences unless given explicitly.
class SolutionField {
 public:
  enum class Mode { Analytic, Grid, Callable };

  static SolutionField analytic(const std::string& u_src) {
    return analytic(parse_expr(u_src, kXVars));
  }

  static SolutionField analytic(Expr u) {
    SolutionField f;
    f.mode_ = Mode::Analytic;
    f.u_ = std::move(u);
    f.p_ = f.u_.diff("x1");
    f.q_ = f.u_.diff("x2");
    return f;
  }

  static SolutionField analytic(Expr u, Expr p, Expr q) {
    SolutionField f;
    f.mode_ = Mode::Analytic;
    f.u_ = std::move(u);
    f.p_ = std::move(p);
    f.q_ = std::move(q);
    return f;
  }

  /// v(y) on a characteristic-coordinate lattice.
  static SolutionField grid(std::shared_ptr<const BicubicGrid> v) {
    SolutionField f;
    f.mode_ = Mode::Grid;
    f.v_ = std::move(v);
    return f;
  }

  static SolutionField callable(std::function<double(Point)> u, double fd_step = 1e-6) {
    SolutionField f;
    f.mode_ = Mode::Callable;
    f.fu_ = std::move(u);
    f.fd_step_ = fd_step;
    return f;
  }

  static SolutionField callable(std::function<double(Point)> u,
                                std::function<double(Point)> p,
                                std::function<double(Point)> q) {
    SolutionField f;
    f.mode_ = Mode::Callable;
    f.fu_ = std::move(u);
    f.fp_ = std::move(p);
    f.fq_ = std::move(q);
    return f;
  }

  Mode mode() const { return mode_; }
  const BicubicGrid* grid_data() const { return v_.get(); }

  double value_at_x(const Point& x) const {
    switch (mode_) {
      case Mode::Analytic: return u_.eval({x.x1, x.x2});
      case Mode::Callable: return fu_(x);
      case Mode::Grid:
        throw Error("SolutionField: grid mode stores v(y); evaluate at characteristic "
                    "coordinates instead");
    }
    return 0.0;
  }

  /// u at characteristic coordinates y.
  double value_at_y(const Point& y, const CharacteristicPair& pair) const {
    if (mode_ == Mode::Grid) return v_->value(y);
    return value_at_x(pair.invert(y));
  }

  /// u and its x-derivatives (p, q) at characteristic coordinates y.
  void values_at_y(const Point& y, const CharacteristicPair& pair, double& u, double& p,
                   double& q) const {
    switch (mode_) {
      case Mode::Analytic: {
        const Point x = pair.invert(y);
        u = u_.eval({x.x1, x.x2});
        p = p_.eval({x.x1, x.x2});
        q = q_.eval({x.x1, x.x2});
        return;
      }
      case Mode::Grid: {
        const Point x = pair.invert(y);
        const Jac2 J = pair.forward_jacobian(x);
        const double vy1 = v_->d1(0, y);
        const double vy2 = v_->d1(1, y);
        u = v_->value(y);
        p = vy1 * J.a11 + vy2 * J.a21;  // dv/dy1 g1_x1 + dv/dy2 g2_x1
        q = vy1 * J.a12 + vy2 * J.a22;
        return;
      }
      case Mode::Callable: {
        const Point x = pair.invert(y);
        u = fu_(x);
        if (fp_ && fq_) {
          p = fp_(x);
          q = fq_(x);
        } else {
          const double h = fd_step_;
          p = (fu_({x.x1 + h, x.x2}) - fu_({x.x1 - h, x.x2})) / (2.0 * h);
          q = (fu_({x.x1, x.x2 + h}) - fu_({x.x1, x.x2 - h})) / (2.0 * h);
        }
        return;
      }
    }
  }

  /// Worst relative mismatch between the stored derivatives and central
  /// finite differences of u, over the given probe points (analytic mode).
  double derivative_defect(const std::vector<Point>& probes, double h = 1e-5) const {
    if (mode_ != Mode::Analytic) throw Error("derivative_defect: analytic mode only");
    double worst = 0.0;
    for (const Point& x : probes) {
      const double fd_p =
          (u_.eval({x.x1 + h, x.x2}) - u_.eval({x.x1 - h, x.x2})) / (2.0 * h);
      const double fd_q =
          (u_.eval({x.x1, x.x2 + h}) - u_.eval({x.x1, x.x2 - h})) / (2.0 * h);
      const double pv = p_.eval({x.x1, x.x2});
      const double qv = q_.eval({x.x1, x.x2});
      worst = std::max(worst, std::abs(fd_p - pv) / std::max(1.0, std::abs(pv)));
      worst = std::max(worst, std::abs(fd_q - qv) / std::max(1.0, std::abs(qv)));
    }
    return worst;
  }

 private:
  Mode mode_ = Mode::Analytic;
  Expr u_, p_, q_;
  std::shared_ptr<const BicubicGrid> v_;
  std::function<double(Point)> fu_, fp_, fq_;
  double fd_step_ = 1e-6;
};

/// The four vertices in x-space, labelled per the identity convention.
struct Vertices {
  Point A;  ///< image of (l1, r1)
  Point B;  ///< image of (l1, r2)
  Point C;  ///< image of (l2, r2)
  Point D;  ///< image of (l2, r1)
};

inline Vertices vertices(const CharRectangle& rect, const CharacteristicPair& pair) {
  return {pair.invert({rect.l1, rect.r1}), pair.invert({rect.l1, rect.r2}),
          pair.invert({rect.l2, rect.r2}), pair.invert({rect.l2, rect.r1})};
}

struct IdentityReport {
  double lhs = 0.0;       ///< u(A) - u(B) + u(C) - u(D)
  double rhs = 0.0;       ///< double integral of Ktilde
  double residual = 0.0;  ///< lhs - rhs
  Vertices verts;
  CharRectangle rect;

  nlohmann::json to_json() const {
    return {
        {"lhs", lhs},
        {"rhs", rhs},
        {"residual", residual},
        {"vertices",
         {{"A", {verts.A.x1, verts.A.x2}},
          {"B", {verts.B.x1, verts.B.x2}},
          {"C", {verts.C.x1, verts.C.x2}},
          {"D", {verts.D.x1, verts.D.x2}}}},
        {"rect", {rect.l1, rect.l2, rect.r1, rect.r2}},
    };
  }
};

/// Evaluate both sides of the identity over `rect` and report the residual.
inline IdentityReport identity_residual(const EquationSpec& eq, const CharacteristicPair& pair,
                                        const SolutionField& field, const CharRectangle& rect,
                                        const QuadratureRule& rule = {}) {
  KernelContext ctx(eq, pair);
  ctx.set_degeneracy_scale(rect);

  IdentityReport rep;
  rep.rect = rect;
  rep.verts = vertices(rect, pair);
  const double uA = field.value_at_y({rect.l1, rect.r1}, pair);
  const double uB = field.value_at_y({rect.l1, rect.r2}, pair);
  const double uC = field.value_at_y({rect.l2, rect.r2}, pair);
  const double uD = field.value_at_y({rect.l2, rect.r1}, pair);
  rep.lhs = uA - uB + uC - uD;
  rep.rhs = integrate2d(
      [&](double z1, double z2) {
        const Point z{z1, z2};
        double u, p, q;
        field.values_at_y(z, pair, u, p, q);
        return ctx.K_tilde_at(z, u, p, q);
      },
      rect, rule);
  rep.residual = rep.lhs - rep.rhs;
  return rep;
}

struct ProbeEntry {
  double l = 0.0;
  double r = 0.0;
  double scaled_residual = 0.0;  ///< residual / (l r)
};

struct ProbeResult {
  std::vector<ProbeEntry> entries;
  /// Richardson extrapolation (first order in l + r) of the last two entries:
  /// the estimated pointwise defect beta^{-1}(A u - f)-style imbalance at the
  /// corner.
  double extrapolated = 0.0;
};

/// Shrinking-parallelogram probe at a fixed corner (l1, r1): evaluates
/// residual / (l r) for each size (l, r) in the (decreasing) list. On a true
/// solution the scaled residuals vanish; otherwise they converge to the
/// pointwise defect of the equation in characteristic coordinates.
inline ProbeResult converse_probe(const EquationSpec& eq, const CharacteristicPair& pair,
                                  const SolutionField& field, const Point& corner,
                                  const std::vector<std::pair<double, double>>& sizes,
                                  const QuadratureRule& rule = {}) {
  if (sizes.empty()) throw Error("converse_probe: need at least one size");
  ProbeResult out;
  for (const auto& [l, r] : sizes) {
    if (l <= 0.0 || r <= 0.0) throw Error("converse_probe: sizes must be positive");
    const CharRectangle rect{corner.x1, corner.x1 + l, corner.x2, corner.x2 + r};
    if (field.mode() == SolutionField::Mode::Grid) {
      // below ~4 grid cells the interpolation noise dominates the 1/(l r)
      // scaling, so the probe refuses to shrink further
      const BicubicGrid* g = field.grid_data();
      if (l < 4.0 * g->h1() || r < 4.0 * g->h2())
        throw Error("converse_probe: grid-mode field needs at least 4 grid cells per "
                    "parallelogram side");
    }
    const IdentityReport rep = identity_residual(eq, pair, field, rect, rule);
    out.entries.push_back({l, r, rep.residual / (l * r)});
  }
  if (out.entries.size() >= 2) {
    const ProbeEntry& p1 = out.entries[out.entries.size() - 2];
    const ProbeEntry& p2 = out.entries.back();
    const double s1 = p1.l + p1.r;
    const double s2 = p2.l + p2.r;
    out.extrapolated = s1 == s2 ? p2.scaled_residual
                                : (s1 * p2.scaled_residual - s2 * p1.scaled_residual) /
                                      (s1 - s2);
  } else {
    out.extrapolated = out.entries.back().scaled_residual;
  }
  return out;
}

}  // namespace ccp
