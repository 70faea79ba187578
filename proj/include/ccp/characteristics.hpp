#pragma once

// Characteristic coordinate systems (gamma1, gamma2): construction from
// closed forms, validation against the characteristic equation and the
// Jacobian condition, inversion (analytic or damped Newton), and numerical
// tracing of the characteristic families by classical RK4.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ccp/errors.hpp"
#include "ccp/expr.hpp"
#include "ccp/fields.hpp"
#include "ccp/problem.hpp"
#include "ccp/types.hpp"

namespace ccp {

/// A 2x2 Jacobian [d row / d col].
struct Jac2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a21; }
};

/// The coordinate map y = (gamma1(x), gamma2(x)) together with its inverse.
/// Immutable and shareable; all evaluations are pure.
class CharacteristicPair {
 public:
  enum class InverseMode { Analytic, Newton };

  CharacteristicPair() = default;

  /// Closed-form characteristics with a closed-form inverse.
  static CharacteristicPair analytic(const std::string& gamma1_src,
                                     const std::string& gamma2_src,
                                     const std::string& inv_x1_src,
                                     const std::string& inv_x2_src,
                                     Tolerances tol = {}) {
    CharacteristicPair p;
    p.g1_ = std::make_shared<ExprField2>(parse_expr(gamma1_src, kXVars));
    p.g2_ = std::make_shared<ExprField2>(parse_expr(gamma2_src, kXVars));
    p.inv_x1_ = std::make_shared<ExprField2>(parse_expr(inv_x1_src, kYVars));
    p.inv_x2_ = std::make_shared<ExprField2>(parse_expr(inv_x2_src, kYVars));
    p.inverse_mode_ = InverseMode::Analytic;
    p.tol_ = tol;
    return p;
  }

  static CharacteristicPair analytic(Expr gamma1, Expr gamma2, Expr inv_x1, Expr inv_x2,
                                     Tolerances tol = {}) {
    CharacteristicPair p;
    p.g1_ = std::make_shared<ExprField2>(std::move(gamma1));
    p.g2_ = std::make_shared<ExprField2>(std::move(gamma2));
    p.inv_x1_ = std::make_shared<ExprField2>(std::move(inv_x1));
    p.inv_x2_ = std::make_shared<ExprField2>(std::move(inv_x2));
    p.inverse_mode_ = InverseMode::Analytic;
    p.tol_ = tol;
    return p;
  }

  /// Characteristics without a closed-form inverse: inversion runs damped
  /// Newton with the symbolic Jacobian, seeded from a guess table sampled
  /// over `guess_region`.
  static CharacteristicPair newton(Expr gamma1, Expr gamma2, const DomainSpec& guess_region,
                                   int guess_n = 9, Tolerances tol = {}) {
    CharacteristicPair p;
    p.g1_ = std::make_shared<ExprField2>(std::move(gamma1));
    p.g2_ = std::make_shared<ExprField2>(std::move(gamma2));
    p.inverse_mode_ = InverseMode::Newton;
    p.tol_ = tol;
    p.build_guess_table(sample_points(guess_region, guess_n));
    return p;
  }

  /// Grid-backed characteristics (from tracing).
  static CharacteristicPair from_grids(std::shared_ptr<const BicubicGrid> gamma1,
                                       std::shared_ptr<const BicubicGrid> gamma2,
                                       Tolerances tol = {}) {
    CharacteristicPair p;
    p.g1_grid_ = gamma1;
    p.g2_grid_ = gamma2;
    p.g1_ = std::move(gamma1);
    p.g2_ = std::move(gamma2);
    p.inverse_mode_ = InverseMode::Newton;
    p.tol_ = tol;
    std::vector<Point> nodes;
    for (int i = 0; i < p.g1_grid_->n1(); ++i)
      for (int j = 0; j < p.g1_grid_->n2(); ++j) nodes.push_back(p.g1_grid_->node(i, j));
    p.build_guess_table(nodes);
    return p;
  }

  const ScalarField2& gamma1() const { return *g1_; }
  const ScalarField2& gamma2() const { return *g2_; }
  InverseMode inverse_mode() const { return inverse_mode_; }
  const Tolerances& tolerances() const { return tol_; }
  bool is_grid_backed() const { return g1_grid_ != nullptr; }

  Point gamma_at(const Point& x) const { return {g1_->value(x), g2_->value(x)}; }

  /// Forward Jacobian d(gamma1, gamma2) / d(x1, x2).
  Jac2 forward_jacobian(const Point& x) const {
    return {g1_->d1(0, x), g1_->d1(1, x), g2_->d1(0, x), g2_->d1(1, x)};
  }

  /// Map characteristic coordinates back to x-space.
  Point invert(const Point& y) const {
    if (inverse_mode_ == InverseMode::Analytic)
      return {inv_x1_->value(y), inv_x2_->value(y)};
    return newton_invert(y);
  }

  /// Inverse-map Jacobian d(x1, x2) / d(y1, y2) at y. Analytic mode
  /// differentiates the closed forms; Newton mode solves
  /// [d gamma/d x][d x/d y] = I by Cramer's rule at x = invert(y).
  Jac2 inverse_jacobian(const Point& y) const {
    if (inverse_mode_ == InverseMode::Analytic)
      return {inv_x1_->d1(0, y), inv_x1_->d1(1, y), inv_x2_->d1(0, y), inv_x2_->d1(1, y)};
    return inverse_jacobian_at_x(invert(y), y);
  }

  /// Same, when x = invert(y) is already known.
  Jac2 inverse_jacobian_at_x(const Point& x, const Point& y) const {
    if (inverse_mode_ == InverseMode::Analytic)
      return {inv_x1_->d1(0, y), inv_x1_->d1(1, y), inv_x2_->d1(0, y), inv_x2_->d1(1, y)};
    const Jac2 J = forward_jacobian(x);
    const double det = J.det();
    if (det == 0.0)
      throw DegeneracyError("inverse_jacobian: vanishing Jacobian", x.x1, x.x2);
    return {J.a22 / det, -J.a12 / det, -J.a21 / det, J.a11 / det};
  }

 private:
  void build_guess_table(const std::vector<Point>& xs) {
    guess_x_.clear();
    guess_y_.clear();
    for (const Point& x : xs) {
      guess_x_.push_back(x);
      guess_y_.push_back(gamma_at(x));
    }
  }

  Point initial_guess(const Point& y) const {
    if (guess_x_.empty()) return {0.0, 0.0};
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < guess_y_.size(); ++k) {
      const double d = std::max(std::abs(guess_y_[k].x1 - y.x1),
                                std::abs(guess_y_[k].x2 - y.x2));
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return guess_x_[best];
  }

  double residual_norm(const Point& x, const Point& y) const {
    return std::max(std::abs(g1_->value(x) - y.x1), std::abs(g2_->value(x) - y.x2));
  }

  Point newton_invert(const Point& y) const {
    Point x = initial_guess(y);
    double r = residual_norm(x, y);
    for (int it = 0; it < tol_.newton_max_iter; ++it) {
      if (r <= tol_.tol_inv) return x;
      const Jac2 J = forward_jacobian(x);
      const double det = J.det();
      if (det == 0.0)
        throw NewtonError("invert: singular Jacobian during Newton iteration", x.x1, x.x2, r);
      const double f1 = g1_->value(x) - y.x1;
      const double f2 = g2_->value(x) - y.x2;
      const double dx1 = -(f1 * J.a22 - f2 * J.a12) / det;
      const double dx2 = -(J.a11 * f2 - J.a21 * f1) / det;
      // halve the step while the residual fails to decrease
      double lambda = 1.0;
      Point x_new = x;
      double r_new = r;
      for (int k = 0; k <= tol_.newton_max_damping; ++k) {
        x_new = {x.x1 + lambda * dx1, x.x2 + lambda * dx2};
        try {
          r_new = residual_norm(x_new, y);
        } catch (const EvalError&) {
          r_new = std::numeric_limits<double>::infinity();
        }
        if (r_new < r) break;
        lambda *= 0.5;
      }
      x = x_new;
      r = r_new;
    }
    if (r <= tol_.tol_inv) return x;
    throw NewtonError("invert: Newton failed to converge to tol_inv = " +
                          std::to_string(tol_.tol_inv) + ", last residual = " +
                          std::to_string(r),
                      x.x1, x.x2, r);
  }

  std::shared_ptr<const ScalarField2> g1_, g2_;
  std::shared_ptr<const BicubicGrid> g1_grid_, g2_grid_;
  std::shared_ptr<const ExprField2> inv_x1_, inv_x2_;
  InverseMode inverse_mode_ = InverseMode::Analytic;
  std::vector<Point> guess_x_, guess_y_;
  Tolerances tol_;
};

struct CharValidationReport {
  bool pass = false;
  double max_char_residual = 0.0;
  Point residual_witness;
  double min_abs_jacobian = 0.0;
  Point jacobian_witness;
  double tol_char = 0.0;
  double eps_jac = 0.0;

  std::string summary() const {
    return std::string(pass ? "pass" : "FAIL") +
           ": max characteristic residual = " + std::to_string(max_char_residual) + " at (" +
           std::to_string(residual_witness.x1) + ", " + std::to_string(residual_witness.x2) +
           "), min |Jacobian| = " + std::to_string(min_abs_jacobian) + " at (" +
           std::to_string(jacobian_witness.x1) + ", " + std::to_string(jacobian_witness.x2) +
           ")";
  }
};

/// Check that each gamma_i solves the characteristic equation
///   a g_x1^2 + 2 b g_x1 g_x2 + c g_x2^2 = 0
/// and that the coordinate Jacobian stays away from zero, over an
/// n x n sample of the domain.
inline CharValidationReport validate_characteristics(const EquationSpec& eq,
                                                     const CharacteristicPair& pair,
                                                     const DomainSpec& dom, int n_samples,
                                                     Tolerances tol = {}) {
  CharValidationReport rep;
  rep.tol_char = tol.tol_char;
  rep.eps_jac = tol.eps_jac;
  std::vector<Point> xs = sample_points(dom, n_samples);
  if (dom.kind == DomainKind::CharRectangle)
    for (Point& p : xs) p = pair.invert(p);
  bool first = true;
  for (const Point& x : xs) {
    const double a = eq.a_at(x), b = eq.b_at(x), c = eq.c_at(x);
    const Jac2 J = pair.forward_jacobian(x);
    const double res1 = std::abs(a * J.a11 * J.a11 + 2.0 * b * J.a11 * J.a12 + c * J.a12 * J.a12);
    const double res2 = std::abs(a * J.a21 * J.a21 + 2.0 * b * J.a21 * J.a22 + c * J.a22 * J.a22);
    const double res = std::max(res1, res2);
    const double jac = std::abs(J.det());
    if (first || res > rep.max_char_residual) {
      rep.max_char_residual = res;
      rep.residual_witness = x;
    }
    if (first || jac < rep.min_abs_jacobian) {
      rep.min_abs_jacobian = jac;
      rep.jacobian_witness = x;
    }
    first = false;
  }
  rep.pass = !first && rep.max_char_residual <= tol.tol_char &&
             rep.min_abs_jacobian >= tol.eps_jac;
  return rep;
}

/// Round-trip defect of the inverse map over an n x n sample of `rect`.
inline double inverse_roundtrip_defect(const CharacteristicPair& pair,
                                       const CharRectangle& rect, int n = 21) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point y{rect.l1 + (rect.l2 - rect.l1) * i / (n - 1.0),
                    rect.r1 + (rect.r2 - rect.r1) * j / (n - 1.0)};
      const Point g = pair.gamma_at(pair.invert(y));
      worst = std::max(worst, std::max(std::abs(g.x1 - y.x1), std::abs(g.x2 - y.x2)));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Characteristic tracing

struct TraceConfig {
  /// Coordinate that varies along the seed line. SeedAxis::X2 places the
  /// line at x1 = (domain lower x1 bound); labels are x2-arrival values.
  enum class SeedAxis { X1, X2 };
  SeedAxis axis = SeedAxis::X2;
  std::vector<double> levels;  ///< seed coordinates (consistency check)
  double rk_step = 0.01;       ///< fixed RK4 step in the march coordinate
  int grid_n1 = 33;
  int grid_n2 = 33;
};

struct TraceReport {
  int clipped_curves = 0;         ///< curves that left the domain box en route
  double max_level_mismatch = 0;  ///< worst |gamma(seed point) - level|
};

struct TracedCharacteristics {
  CharacteristicPair pair;
  TraceReport report;
  std::shared_ptr<const BicubicGrid> gamma1_grid;
  std::shared_ptr<const BicubicGrid> gamma2_grid;
};

namespace detail {

/// One classical RK4 step of dx2/dx1 = slope(x1, x2).
template <class SlopeFn>
double rk4_step(const SlopeFn& slope, double x1, double x2, double h) {
  const double k1 = slope(x1, x2);
  const double k2 = slope(x1 + 0.5 * h, x2 + 0.5 * h * k1);
  const double k3 = slope(x1 + 0.5 * h, x2 + 0.5 * h * k2);
  const double k4 = slope(x1 + h, x2 + h * k3);
  return x2 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrate from (x1, x2) to the plane x1 = target; returns the arrival x2.
template <class SlopeFn>
double march_to_plane(const SlopeFn& slope, double x1, double x2, double target, double h,
                      bool* left_box, double box_lo, double box_hi) {
  const double span = target - x1;
  if (span == 0.0) return x2;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / h)));
  const double step = span / n;
  for (int k = 0; k < n; ++k) {
    x2 = rk4_step(slope, x1 + k * step, x2, step);
    if (left_box && (x2 < box_lo || x2 > box_hi)) *left_box = true;
  }
  return x2;
}

}  // namespace detail

/// Integrate both characteristic families with fixed-step classical RK4 and
/// sample the resulting first integrals on a grid_n1 x grid_n2 lattice over
/// the (axis-rectangle) domain. Each curve is labelled by its coordinate on
/// the seed line, so the label set is a valid pair of first integrals; the
/// lattice fields get bicubic interpolation, and the inverse map runs in
/// Newton mode with the lattice as its initial-guess table.
///
/// Requires a != 0 throughout the domain (the slopes dx2/dx1 are finite).
inline TracedCharacteristics trace_characteristics(const EquationSpec& eq,
                                                   const DomainSpec& dom,
                                                   const TraceConfig& cfg,
                                                   Tolerances tol = {}) {
  if (dom.kind != DomainKind::AxisRectangle)
    throw Error("trace_characteristics: only axis-rectangle domains are supported");
  dom.validate();
  if (cfg.rk_step <= 0.0) throw Error("trace_characteristics: rk_step must be positive");
  if (cfg.grid_n1 < 4 || cfg.grid_n2 < 4)
    throw Error("trace_characteristics: at least a 4x4 sampling grid is required");

  auto slope_of = [&eq, &tol](int family) {
    return [&eq, &tol, family](double x1, double x2) {
      const Point x{x1, x2};
      const double a = eq.a_at(x);
      if (a == 0.0)
        throw DegeneracyError("trace: a = 0, slope dx2/dx1 undefined", x1, x2);
      const double b = eq.b_at(x);
      const double c = eq.c_at(x);
      const double disc = b * b - a * c;
      if (disc < tol.eps_hyp)
        throw DegeneracyError("trace: non-hyperbolic point on curve", x1, x2);
      const double root = std::sqrt(disc);
      return family == 1 ? (b + root) / a : (b - root) / a;
    };
  };
  const auto slope1 = slope_of(1);
  const auto slope2 = slope_of(2);

  const double x1_lo = dom.b[0], x1_hi = dom.b[1];
  const double x2_lo = dom.b[2], x2_hi = dom.b[3];
  const int n1 = cfg.grid_n1, n2 = cfg.grid_n2;
  const double h1 = (x1_hi - x1_lo) / (n1 - 1);
  const double h2 = (x2_hi - x2_lo) / (n2 - 1);
  // march well beyond the box so exit detection stays informative
  const double margin = 10.0 * std::max(x2_hi - x2_lo, x1_hi - x1_lo);

  TraceReport report;
  std::vector<double> v1(static_cast<std::size_t>(n1) * n2);
  std::vector<double> v2(v1.size());
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const double x1 = x1_lo + i * h1;
      const double x2 = x2_lo + j * h2;
      bool clipped = false;
      double label1, label2;
      if (cfg.axis == TraceConfig::SeedAxis::X2) {
        // seed line x1 = x1_lo; the node's curve meets it at the label
        label1 = detail::march_to_plane(slope1, x1, x2, x1_lo, cfg.rk_step, &clipped,
                                        x2_lo - margin, x2_hi + margin);
        label2 = detail::march_to_plane(slope2, x1, x2, x1_lo, cfg.rk_step, &clipped,
                                        x2_lo - margin, x2_hi + margin);
      } else {
        // seed line x2 = x2_lo; march in x2 with dx1/dx2 = 1 / slope
        auto recip = [](auto s) {
          return [s](double t2, double t1) {
            const double v = s(t1, t2);
            if (v == 0.0)
              throw DegeneracyError("trace: characteristic parallel to the seed line", t1, t2);
            return 1.0 / v;
          };
        };
        label1 = detail::march_to_plane(recip(slope1), x2, x1, x2_lo, cfg.rk_step, &clipped,
                                        x1_lo - margin, x1_hi + margin);
        label2 = detail::march_to_plane(recip(slope2), x2, x1, x2_lo, cfg.rk_step, &clipped,
                                        x1_lo - margin, x1_hi + margin);
      }
      if (clipped) ++report.clipped_curves;
      const std::size_t idx = static_cast<std::size_t>(i) * n2 + j;
      v1[idx] = label1;
      v2[idx] = label2;
    }
  }

  auto g1 = std::make_shared<BicubicGrid>(x1_lo, h1, n1, x2_lo, h2, n2, std::move(v1));
  auto g2 = std::make_shared<BicubicGrid>(x1_lo, h1, n1, x2_lo, h2, n2, std::move(v2));

  // labels on the seed line itself must reproduce the seed coordinates
  for (double level : cfg.levels) {
    const Point seed = cfg.axis == TraceConfig::SeedAxis::X2 ? Point{x1_lo, level}
                                                             : Point{level, x2_lo};
    if (seed.x1 < x1_lo || seed.x1 > x1_hi || seed.x2 < x2_lo || seed.x2 > x2_hi) continue;
    const double coord = cfg.axis == TraceConfig::SeedAxis::X2 ? seed.x2 : seed.x1;
    report.max_level_mismatch =
        std::max({report.max_level_mismatch, std::abs(g1->value(seed) - coord),
                  std::abs(g2->value(seed) - coord)});
  }

  TracedCharacteristics out;
  out.gamma1_grid = g1;
  out.gamma2_grid = g2;
  out.pair = CharacteristicPair::from_grids(g1, g2, tol);
  out.report = report;
  return out;
}

/// Write a traced lattice as CSV with columns x1, x2, gamma1, gamma2
/// (row-major over the lattice, 17 significant digits, LF line endings).
inline void write_trace_csv(const TracedCharacteristics& traced, std::ostream& os) {
  const BicubicGrid& g1 = *traced.gamma1_grid;
  const BicubicGrid& g2 = *traced.gamma2_grid;
  os << "x1,x2,gamma1,gamma2\n";
  for (int i = 0; i < g1.n1(); ++i)
    for (int j = 0; j < g1.n2(); ++j) {
      const Point x = g1.node(i, j);
      os << detail::format_double(x.x1) << ',' << detail::format_double(x.x2) << ','
         << detail::format_double(g1.at(i, j)) << ',' << detail::format_double(g2.at(i, j))
         << '\n';
    }
}

}  // namespace ccp
