#pragma once

// Boundary- and initial-value solvers built on the parallelogram identity:
//  - Goursat problem for the wave operator (closed form + quadrature);
//  - first mixed problem on the quadrant (d'Alembert branch and the
//    reflected branch from the identity, with matching-condition checks);
//  - second Darboux problem on a sector via the nested-parallelogram
//    alternating series, with a fixed-point grid iteration for the
//    semilinear case;
//  - Goursat problem for the linear equation with lower-order terms via
//    Picard iteration of the integro-differential representation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ccp/errors.hpp"
#include "ccp/expr.hpp"
#include "ccp/fields.hpp"
#include "ccp/quadrature.hpp"
#include "ccp/types.hpp"

#include "json.hpp"

namespace ccp {

inline const std::vector<std::string> kTVar = {"t"};
inline const std::vector<std::string> kGVars = {"x1", "x2", "u"};

namespace detail {

/// Iterated integral int_{t_lo}^{t_hi} dt int_{xi_lo(t)}^{xi_hi(t)} f(t, xi) dxi
/// with the outer axis on Gauss nodes and oriented inner bounds.
template <class F2, class Lo, class Hi>
double integrate_iterated(F2&& f, double t_lo, double t_hi, Lo&& xi_lo, Hi&& xi_hi,
                          const QuadratureRule& rule) {
  if (t_lo == t_hi) return 0.0;
  const double sign = t_hi < t_lo ? -1.0 : 1.0;
  const double a = std::min(t_lo, t_hi), b = std::max(t_lo, t_hi);
  std::vector<double> pts, wts;
  axis_points(rule, a, b, pts, wts);
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = pts[i];
    sum += wts[i] * integrate1d_oriented([&](double xi) { return f(t, xi); }, xi_lo(t),
                                         xi_hi(t), rule);
  }
  return sign * sum;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Goursat problem for the wave operator on the sector -a x1 < x2 < a x1

struct GoursatWaveData {
  double speed = 1.0;  ///< a0 > 0
  Expr phi1;           ///< over t: data on x2 = +a0 x1
  Expr phi2;           ///< over t: data on x2 = -a0 x1
  Expr f;              ///< over (x1, x2)

  void validate() const {
    if (!(speed > 0.0)) throw Error("goursat-wave: speed must be positive");
  }
  /// phi1(0) - phi2(0); the data are compatible when this vanishes.
  double compatibility_defect() const {
    return phi1.eval({0.0}) - phi2.eval({0.0});
  }
};

/// Closed-form solution via the identity anchored at the origin:
///   u = phi1((a x1 + x2)/(2a)) + phi2((a x1 - x2)/(2a)) - phi1(0)
///       - 1/(4 a^2) * oriented double integral of f over
///         [0, x2 - a x1] x [0, x2 + a x1] in characteristic coordinates.
/// The first upper limit is negative inside the sector; the integral is
/// evaluated with orientation rather than reordered.
inline double solve_goursat_wave(const GoursatWaveData& data, const Point& x,
                                 const QuadratureRule& rule = {}) {
  data.validate();
  const double a = data.speed;
  if (!(x.x1 > 0.0 && -a * x.x1 < x.x2 && x.x2 < a * x.x1))
    throw Error("goursat-wave: point (" + std::to_string(x.x1) + ", " +
                std::to_string(x.x2) + ") is outside the sector -a x1 < x2 < a x1");
  const double u_data = data.phi1.eval({(a * x.x1 + x.x2) / (2.0 * a)}) +
                        data.phi2.eval({(a * x.x1 - x.x2) / (2.0 * a)}) -
                        data.phi1.eval({0.0});
  const double integral = integrate2d_oriented(
      [&](double y1, double y2) {
        return data.f.eval({(y2 - y1) / (2.0 * a), (y1 + y2) / 2.0});
      },
      0.0, x.x2 - a * x.x1, 0.0, x.x2 + a * x.x1, rule);
  return u_data - integral / (4.0 * a * a);
}

// ---------------------------------------------------------------------------
// First mixed problem on the quadrant x1 > 0, x2 > 0

struct MixedWaveData {
  double speed = 1.0;
  Expr phi;  ///< over t: u(0, x2) = phi(x2)
  Expr psi;  ///< over t: u_x1(0, x2) = psi(x2)
  Expr mu;   ///< over t: u(x1, 0) = mu(x1)
  Expr f;    ///< over (x1, x2)

  void validate() const {
    if (!(speed > 0.0)) throw Error("mixed-wave: speed must be positive");
  }
};

/// Residuals of the matching conditions at the corner:
///   mu(0) - phi(0),  mu'(0) - psi(0),  mu''(0) - (a^2 phi''(0) + f(0,0)).
/// Violations do not prevent solving; they show up as jumps across the
/// characteristic x2 = a x1.
struct MatchingReport {
  double value = 0.0;
  double first_derivative = 0.0;
  double second_derivative = 0.0;

  double worst() const {
    return std::max({std::abs(value), std::abs(first_derivative),
                     std::abs(second_derivative)});
  }
};

inline MatchingReport matching_conditions(const MixedWaveData& data) {
  const double a = data.speed;
  const Expr mu_t = data.mu.diff("t");
  const Expr mu_tt = mu_t.diff("t");
  const Expr phi_tt = data.phi.diff("t").diff("t");
  MatchingReport rep;
  rep.value = data.mu.eval({0.0}) - data.phi.eval({0.0});
  rep.first_derivative = mu_t.eval({0.0}) - data.psi.eval({0.0});
  rep.second_derivative = mu_tt.eval({0.0}) - (a * a * phi_tt.eval({0.0}) +
                                               data.f.eval({0.0, 0.0}));
  return rep;
}

/// d'Alembert branch, valid for x2 - a x1 >= 0.
inline double mixed_wave_dalembert(const MixedWaveData& data, const Point& x,
                                   const QuadratureRule& rule = {}) {
  const double a = data.speed;
  const double phi_part =
      0.5 * (data.phi.eval({x.x2 - a * x.x1}) + data.phi.eval({x.x2 + a * x.x1}));
  const double psi_part = integrate1d_oriented(
      [&](double xi) { return data.psi.eval({xi}); }, x.x2 - a * x.x1, x.x2 + a * x.x1,
      rule);
  const double f_part = detail::integrate_iterated(
      [&](double tau, double xi) { return data.f.eval({tau, xi}); }, 0.0, x.x1,
      [&](double tau) { return x.x2 - a * (x.x1 - tau); },
      [&](double tau) { return x.x2 + a * (x.x1 - tau); }, rule);
  return phi_part + (psi_part + f_part) / (2.0 * a);
}

/// Reflected branch from the identity, valid for x2 - a x1 <= 0.
inline double mixed_wave_reflected(const MixedWaveData& data, const Point& x,
                                   const QuadratureRule& rule = {}) {
  const double a = data.speed;
  const double mu_part = data.mu.eval({x.x1 - x.x2 / a});
  const double phi_part =
      0.5 * (data.phi.eval({a * x.x1 + x.x2}) - data.phi.eval({a * x.x1 - x.x2}));
  const double psi_part = integrate1d_oriented(
      [&](double xi) { return data.psi.eval({xi}); }, a * x.x1 - x.x2, a * x.x1 + x.x2,
      rule);
  const double f_triangle = detail::integrate_iterated(
      [&](double tau, double xi) { return data.f.eval({tau, xi}); }, 0.0, x.x2 / a,
      [&](double tau) { return a * x.x1 - x.x2 + a * tau; },
      [&](double tau) { return a * x.x1 + x.x2 - a * tau; }, rule);
  // the outer limits run from a x1 - x2 down to x2 - a x1: oriented
  const double f_rect = integrate2d_oriented(
      [&](double y1, double y2) {
        return data.f.eval({(y2 - y1) / (2.0 * a), (y2 + y1) / 2.0});
      },
      a * x.x1 - x.x2, x.x2 - a * x.x1, a * x.x1 - x.x2, a * x.x1 + x.x2, rule);
  return mu_part + phi_part + (psi_part + f_triangle) / (2.0 * a) -
         f_rect / (4.0 * a * a);
}

/// Branch on the sign of x2 - a x1; points on the characteristic are served
/// by the d'Alembert branch.
inline double solve_mixed_wave(const MixedWaveData& data, const Point& x,
                               const QuadratureRule& rule = {}) {
  data.validate();
  if (!(x.x1 >= 0.0 && x.x2 >= 0.0))
    throw Error("mixed-wave: point is outside the quadrant x1 >= 0, x2 >= 0");
  if (x.x2 - data.speed * x.x1 >= 0.0) return mixed_wave_dalembert(data, x, rule);
  return mixed_wave_reflected(data, x, rule);
}

/// Jump of the solution across x2 = a x1 at abscissa x1: the difference of
/// the two branch formulas evaluated on the characteristic. Equal to
/// mu(0) - phi(0) when the integrals are exact.
inline double mixed_wave_jump(const MixedWaveData& data, double x1,
                              const QuadratureRule& rule = {}) {
  const Point on_line{x1, data.speed * x1};
  return mixed_wave_reflected(data, on_line, rule) -
         mixed_wave_dalembert(data, on_line, rule);
}

// ---------------------------------------------------------------------------
// Second Darboux problem on the sector alpha x1 < x2 < beta x1

struct DarbouxData {
  double alpha = 0.5;  ///< 0 < alpha < 1
  double beta = 2.0;   ///< beta > 1
  double lambda = 0.0;
  Expr f;  ///< over (x1, x2)
  Expr g;  ///< over (x1, x2, u); used when lambda != 0
  double L1 = 0.0;  ///< declared growth constants: |g| <= L1 + L2 |u|
  double L2 = 0.0;

  void validate() const {
    if (!(0.0 < alpha && alpha < 1.0 && 1.0 < beta))
      throw Error("darboux: slopes must satisfy 0 < alpha < 1 < beta");
  }
  bool in_sector(const Point& x) const {
    return x.x1 >= 0.0 && alpha * x.x1 <= x.x2 && x.x2 <= beta * x.x1;
  }
};

/// Worst violation of the declared growth bound over a sample; positive
/// values mean |g| exceeded L1 + L2 |u| somewhere (reported, not fatal).
inline double darboux_growth_violation(const DarbouxData& data, double x1_max = 1.0,
                                       double u_max = 10.0, int n = 200) {
  double worst = -std::numeric_limits<double>::infinity();
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) / 9007199254740992.0;
  };
  for (int k = 0; k < n; ++k) {
    const double x1 = x1_max * next();
    const double s = data.alpha + (data.beta - data.alpha) * next();
    const double u = u_max * (2.0 * next() - 1.0);
    const double g = data.g.eval({x1, s * x1, u});
    worst = std::max(worst, std::abs(g) - (data.L1 + data.L2 * std::abs(u)));
  }
  return worst;
}

/// One nested parallelogram: vertices P_{i+1}, M_i, P_i, N_i and the
/// axis-aligned rectangle they span (the characteristics are coordinate
/// lines here).
struct CascadeCell {
  Point P_next;  ///< (x2/beta, alpha x1)
  Point M;       ///< (x2/beta, x2), on x2 = beta x1
  Point P;       ///< (x1, x2)
  Point N;       ///< (x1, alpha x1), on x2 = alpha x1
  CharRectangle rect;
};

/// The nested-parallelogram cascade from P0, truncated when the current
/// vertex has sup-norm below cascade_eps. A start on a sector edge produces
/// one zero-area cell and terminates.
inline std::vector<CascadeCell> darboux_cascade(const DarbouxData& data, const Point& P0,
                                                double cascade_eps = 1e-14,
                                                int max_cells = 4000) {
  data.validate();
  if (!data.in_sector(P0))
    throw Error("darboux: start point is outside the closed sector");
  std::vector<CascadeCell> cells;
  Point P = P0;
  for (int i = 0; i < max_cells; ++i) {
    if (max_abs(P) < cascade_eps) break;
    CascadeCell cell;
    cell.P = P;
    cell.N = {P.x1, data.alpha * P.x1};
    cell.M = {P.x2 / data.beta, P.x2};
    cell.P_next = {P.x2 / data.beta, data.alpha * P.x1};
    cell.rect = {P.x2 / data.beta, P.x1, data.alpha * P.x1, P.x2};
    cells.push_back(cell);
    if (cell.rect.area() == 0.0) break;  // degenerate start on a sector edge
    P = cell.P_next;
  }
  return cells;
}

struct DarbouxPointResult {
  double value = 0.0;
  std::vector<double> terms;  ///< signed contribution of each parallelogram
  bool truncated = false;     ///< stopped because |term| < series_eps
};

/// Linear case (lambda = 0): alternating series of f-integrals over the
/// cascade rectangles, truncated when the current term drops below
/// series_eps.
inline DarbouxPointResult solve_darboux_series(const DarbouxData& data, const Point& x,
                                               const QuadratureRule& rule = {},
                                               double series_eps = 1e-12,
                                               double cascade_eps = 1e-14) {
  DarbouxPointResult out;
  const auto cells = darboux_cascade(data, x, cascade_eps);
  double sign = 1.0;
  for (const CascadeCell& cell : cells) {
    const double integral =
        cell.rect.area() == 0.0
            ? 0.0
            : integrate2d([&](double z1, double z2) { return data.f.eval({z1, z2}); },
                          cell.rect, rule);
    const double term = sign * integral;
    out.terms.push_back(term);
    out.value += term;
    sign = -sign;
    if (std::abs(term) < series_eps) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

struct DarbouxGridConfig {
  int n_x1 = 21;     ///< nodes along x1 in [0, x1_max]
  int n_ratio = 21;  ///< nodes in s = x2/x1 in [alpha, beta]
  double x1_max = 1.0;
  QuadratureRule quad{QuadKind::GaussLegendreTensor, 8, 1};
  double series_eps = 1e-10;
  double picard_tol = 1e-10;
  int max_picard = 200;
};

/// Fixed-point solution on a sector grid: u is stored over (x1, s = x2/x1)
/// with bicubic interpolation.
class DarbouxSolution {
 public:
  DarbouxSolution(std::shared_ptr<const BicubicGrid> grid, double alpha, double beta)
      : grid_(std::move(grid)), alpha_(alpha), beta_(beta) {}

  double value_at(const Point& x) const {
    if (x.x1 <= grid_->h1() * 1e-9) return 0.0;
    const double s = std::clamp(x.x2 / x.x1, alpha_, beta_);
    return grid_->value({x.x1, s});
  }

  const BicubicGrid& grid() const { return *grid_; }

 private:
  std::shared_ptr<const BicubicGrid> grid_;
  double alpha_, beta_;
};

struct DarbouxFieldResult {
  std::shared_ptr<DarbouxSolution> solution;
  int iterations = 0;
  std::vector<double> sup_history;  ///< successive-difference sup norms
  bool converged = false;

  nlohmann::json to_json() const {
    return {{"iterations", iterations},
            {"sup_norm_history", sup_history},
            {"converged", converged}};
  }
};

/// Semilinear case: fixed-point iteration of the full alternating series
///   u_{k+1}(x) = sum_i (-1)^i  double-integral over cell_i of
///                [f(z) - lambda g(z, u_k(z))]
/// over a sector lattice, from u_0 = 0, stopping on the sup norm of
/// successive differences. Non-convergence raises ConvergenceError carrying
/// the history.
inline DarbouxFieldResult solve_darboux_field(const DarbouxData& data,
                                              const DarbouxGridConfig& cfg) {
  data.validate();
  const int n1 = cfg.n_x1, n2 = cfg.n_ratio;
  if (n1 < 4 || n2 < 4) throw Error("darboux: grid needs at least 4 nodes per axis");
  const double h1 = cfg.x1_max / (n1 - 1);
  const double h2 = (data.beta - data.alpha) / (n2 - 1);

  // cascade geometry and quadrature nodes are u-independent: precompute
  struct NodePlan {
    std::vector<CharRectangle> rects;
    std::vector<double> signs;
  };
  std::vector<NodePlan> plans(static_cast<std::size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const double x1 = i * h1;
      const double s = data.alpha + j * h2;
      NodePlan& plan = plans[static_cast<std::size_t>(i) * n2 + j];
      double sign = 1.0;
      for (const CascadeCell& cell : darboux_cascade(data, {x1, s * x1})) {
        if (cell.rect.area() < cfg.series_eps && plan.rects.size() > 2) break;
        plan.rects.push_back(cell.rect);
        plan.signs.push_back(sign);
        sign = -sign;
      }
    }

  std::vector<double> u(static_cast<std::size_t>(n1) * n2, 0.0);
  DarbouxFieldResult out;
  auto make_grid = [&](const std::vector<double>& vals) {
    return std::make_shared<BicubicGrid>(0.0, h1, n1, data.alpha, h2, n2, vals);
  };

  for (int k = 0; k < cfg.max_picard; ++k) {
    const auto grid = make_grid(u);
    const DarbouxSolution current(grid, data.alpha, data.beta);
    std::vector<double> next(u.size(), 0.0);
    double diff = 0.0;
    for (std::size_t idx = 0; idx < next.size(); ++idx) {
      const NodePlan& plan = plans[idx];
      double value = 0.0;
      for (std::size_t c = 0; c < plan.rects.size(); ++c) {
        const double integral = integrate2d(
            [&](double z1, double z2) {
              const double uz = data.lambda == 0.0 ? 0.0 : current.value_at({z1, z2});
              return data.f.eval({z1, z2}) -
                     (data.lambda == 0.0 ? 0.0
                                         : data.lambda * data.g.eval({z1, z2, uz}));
            },
            plan.rects[c], cfg.quad);
        value += plan.signs[c] * integral;
      }
      next[idx] = value;
      diff = std::max(diff, std::abs(next[idx] - u[idx]));
    }
    u.swap(next);
    out.sup_history.push_back(diff);
    out.iterations = k + 1;
    if (diff <= cfg.picard_tol || data.lambda == 0.0) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged)
    throw ConvergenceError("darboux: fixed-point iteration did not reach picard_tol after " +
                               std::to_string(out.iterations) + " sweeps",
                           out.sup_history);
  out.solution = std::make_shared<DarbouxSolution>(make_grid(u), data.alpha, data.beta);
  return out;
}

/// Point evaluation: the series for lambda = 0, otherwise a grid fixed point
/// covering the point.
inline double solve_darboux(const DarbouxData& data, const Point& x,
                            const DarbouxGridConfig& cfg = {}) {
  data.validate();
  if (!data.in_sector(x)) throw Error("darboux: point is outside the closed sector");
  if (data.lambda == 0.0) {
    QuadratureRule rule{QuadKind::GaussLegendreTensor, 16, 1};
    return solve_darboux_series(data, x, rule, cfg.series_eps).value;
  }
  DarbouxGridConfig covering = cfg;
  covering.x1_max = std::max(cfg.x1_max, std::max(x.x1, x.x2 / data.alpha) * 1.0001);
  return solve_darboux_field(data, covering).solution->value_at(x);
}

// ---------------------------------------------------------------------------
// Goursat problem for the linear equation with lower-order terms

struct LinearGoursatData {
  Point corner{0.0, 0.0};  ///< (x1^0, x2^0)
  Expr a_lo, b_lo, c_lo;   ///< over (x1, x2)
  Expr f;                  ///< over (x1, x2)
  Expr phi;                ///< over t: u(x1^0, x2) = phi(x2)
  Expr psi;                ///< over t: u(x1, x2^0) = psi(x1)

  /// phi(x2^0) - psi(x1^0)
  double compatibility_defect() const {
    return phi.eval({corner.x2}) - psi.eval({corner.x1});
  }
  bool zero_lower_order() const {
    return a_lo.is_constant(0.0) && b_lo.is_constant(0.0) && c_lo.is_constant(0.0);
  }
};

struct PicardGridConfig {
  int n1 = 129;
  int n2 = 129;
  double x1_max = 1.0;
  double x2_max = 1.0;
  double picard_tol = 1e-10;
  int max_picard = 200;
};

struct PicardResult {
  std::shared_ptr<const BicubicGrid> u;  ///< lattice over [x1^0,x1_max] x [x2^0,x2_max]
  int iterations = 0;
  std::vector<double> sup_history;
  bool converged = false;

  nlohmann::json to_json() const {
    return {{"iterations", iterations},
            {"sup_norm_history", sup_history},
            {"converged", converged}};
  }
};

/// Picard iteration of
///   u(x) = phi(x2) + psi(x1) - phi(x2^0)
///          + int int [f - a_lo u_x1 - b_lo u_x2 - c_lo u]
/// on a uniform grid. Iterate derivatives use centered differences inside
/// and one-sided second-order stencils at the edges; the cumulative double
/// integral uses the composite midpoint rule with cell-center values from
/// the bilinear reconstruction. When all lower-order coefficients are the
/// zero expression the map is constant and a single application suffices.
inline PicardResult solve_goursat_linear_picard(const LinearGoursatData& data,
                                                const PicardGridConfig& cfg) {
  const int n1 = cfg.n1, n2 = cfg.n2;
  if (n1 < 5 || n2 < 5)
    throw Error("goursat-linear: grid too coarse (fewer than 4 cells per axis)");
  if (!(cfg.x1_max > data.corner.x1 && cfg.x2_max > data.corner.x2))
    throw Error("goursat-linear: grid extent must exceed the corner");
  const double h1 = (cfg.x1_max - data.corner.x1) / (n1 - 1);
  const double h2 = (cfg.x2_max - data.corner.x2) / (n2 - 1);
  const std::size_t total = static_cast<std::size_t>(n1) * n2;
  auto at = [n2](std::vector<double>& v, int i, int j) -> double& {
    return v[static_cast<std::size_t>(i) * n2 + j];
  };

  // node coordinates and coefficient samples (loop invariants)
  std::vector<double> x1s(n1), x2s(n2);
  for (int i = 0; i < n1; ++i) x1s[i] = data.corner.x1 + i * h1;
  for (int j = 0; j < n2; ++j) x2s[j] = data.corner.x2 + j * h2;
  std::vector<double> av(total), bv(total), cv(total), fv(total), base(total);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n2 + j;
      av[idx] = data.a_lo.eval({x1s[i], x2s[j]});
      bv[idx] = data.b_lo.eval({x1s[i], x2s[j]});
      cv[idx] = data.c_lo.eval({x1s[i], x2s[j]});
      fv[idx] = data.f.eval({x1s[i], x2s[j]});
      base[idx] = data.phi.eval({x2s[j]}) + data.psi.eval({x1s[i]}) -
                  data.phi.eval({data.corner.x2});
    }

  const bool constant_map = data.zero_lower_order();
  std::vector<double> u(total, 0.0), p(total), q(total), F(total), I(total);
  PicardResult out;
  for (int k = 0; k < cfg.max_picard; ++k) {
    // derivatives of the current iterate
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        double dp, dq;
        if (i == 0)
          dp = (-3.0 * at(u, 0, j) + 4.0 * at(u, 1, j) - at(u, 2, j)) / (2.0 * h1);
        else if (i == n1 - 1)
          dp = (3.0 * at(u, i, j) - 4.0 * at(u, i - 1, j) + at(u, i - 2, j)) / (2.0 * h1);
        else
          dp = (at(u, i + 1, j) - at(u, i - 1, j)) / (2.0 * h1);
        if (j == 0)
          dq = (-3.0 * at(u, i, 0) + 4.0 * at(u, i, 1) - at(u, i, 2)) / (2.0 * h2);
        else if (j == n2 - 1)
          dq = (3.0 * at(u, i, j) - 4.0 * at(u, i, j - 1) + at(u, i, j - 2)) / (2.0 * h2);
        else
          dq = (at(u, i, j + 1) - at(u, i, j - 1)) / (2.0 * h2);
        at(p, i, j) = dp;
        at(q, i, j) = dq;
      }
    for (std::size_t idx = 0; idx < total; ++idx)
      F[idx] = fv[idx] - av[idx] * p[idx] - bv[idx] * q[idx] - cv[idx] * u[idx];
    // cumulative midpoint integral: cell centers carry the 4-corner mean
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        if (i == 0 || j == 0) {
          at(I, i, j) = 0.0;
          continue;
        }
        const double cell = 0.25 * (at(F, i - 1, j - 1) + at(F, i, j - 1) +
                                    at(F, i - 1, j) + at(F, i, j)) * h1 * h2;
        at(I, i, j) = at(I, i - 1, j) + at(I, i, j - 1) - at(I, i - 1, j - 1) + cell;
      }
    double diff = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      const double next = base[idx] + I[idx];
      diff = std::max(diff, std::abs(next - u[idx]));
      u[idx] = next;
    }
    out.sup_history.push_back(diff);
    out.iterations = k + 1;
    if (constant_map || diff <= cfg.picard_tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged)
    throw ConvergenceError("goursat-linear: Picard iteration did not reach picard_tol after " +
                               std::to_string(out.iterations) + " sweeps",
                           out.sup_history);
  out.u = std::make_shared<BicubicGrid>(data.corner.x1, h1, n1, data.corner.x2, h2, n2,
                                        std::move(u));
  return out;
}

// ---------------------------------------------------------------------------
// CSV output (deterministic: 17 significant digits, LF endings)

inline void write_solution_csv(std::ostream& os, const std::vector<Point>& points,
                               const std::vector<double>& values) {
  os << "x1,x2,u\n";
  for (std::size_t k = 0; k < points.size(); ++k)
    os << detail::format_double(points[k].x1) << ',' << detail::format_double(points[k].x2)
       << ',' << detail::format_double(values[k]) << '\n';
}

}  // namespace ccp
