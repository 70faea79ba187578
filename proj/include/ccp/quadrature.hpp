#pragma once

// Tensor-product panel quadrature over characteristic rectangles.
// Gauss-Legendre nodes and weights are computed at startup by Newton
// iteration on the Legendre polynomials; no external tables.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccp/errors.hpp"
#include "ccp/types.hpp"

namespace ccp {

enum class QuadKind { GaussLegendreTensor, MidpointComposite };

struct QuadratureRule {
  QuadKind kind = QuadKind::GaussLegendreTensor;
  int points_per_axis = 16;  ///< in [1, 64]
  int panels_per_axis = 1;   ///< >= 1

  void validate() const {
    if (points_per_axis < 1 || points_per_axis > 64)
      throw Error("quadrature: points_per_axis must lie in [1, 64]");
    if (panels_per_axis < 1) throw Error("quadrature: panels_per_axis must be >= 1");
  }
};

namespace detail {

/// Nodes and weights on the reference interval [-1, 1].
struct GaussTable {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Legendre P_n(x) and its derivative by the three-term recurrence.
inline void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

inline GaussTable compute_gauss(int n) {
  GaussTable t;
  t.nodes.resize(static_cast<std::size_t>(n));
  t.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton to <= 1e-15
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(n, x, p, dp);
    t.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    t.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n == 1) {
    t.nodes[0] = 0.0;
    t.weights[0] = 2.0;
  }
  return t;
}

inline const GaussTable& gauss_table(int n) {
  static std::vector<GaussTable> cache(65);
  GaussTable& t = cache[static_cast<std::size_t>(n)];
  if (t.nodes.empty()) t = compute_gauss(n);
  return t;
}

/// Nodes/weights for one axis of the rule, mapped to [a, b], laid out panel
/// by panel so summation order is reproducible.
inline void axis_points(const QuadratureRule& rule, double a, double b,
                        std::vector<double>& pts, std::vector<double>& wts) {
  pts.clear();
  wts.clear();
  const int panels = rule.panels_per_axis;
  const double h = (b - a) / panels;
  if (rule.kind == QuadKind::MidpointComposite) {
    const int m = rule.points_per_axis;
    const double step = h / m;
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < m; ++i) {
        pts.push_back(a + p * h + (i + 0.5) * step);
        wts.push_back(step);
      }
    return;
  }
  const GaussTable& t = gauss_table(rule.points_per_axis);
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      pts.push_back(mid + 0.5 * h * t.nodes[i]);
      wts.push_back(0.5 * h * t.weights[i]);
    }
  }
}

}  // namespace detail

/// Integrate g over [a, b].
template <class F>
double integrate1d(F&& g, double a, double b, const QuadratureRule& rule = {}) {
  rule.validate();
  std::vector<double> pts, wts;
  detail::axis_points(rule, a, b, pts, wts);
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) sum += wts[i] * g(pts[i]);
  return sum;
}

/// Integrate g(z1, z2) over the rectangle [l1,l2] x [r1,r2]. Panels are
/// traversed row-major and nodes row-major within each panel, so the
/// summation order (and hence the result, bit for bit) is deterministic.
/// Evaluation errors from g are rethrown with the node location attached.
template <class F>
double integrate2d(F&& g, const CharRectangle& rect, const QuadratureRule& rule = {}) {
  rule.validate();
  std::vector<double> p1, w1, p2, w2;
  detail::axis_points(rule, rect.l1, rect.l2, p1, w1);
  detail::axis_points(rule, rect.r1, rect.r2, p2, w2);
  const std::size_t n = static_cast<std::size_t>(rule.points_per_axis);
  const std::size_t panels = static_cast<std::size_t>(rule.panels_per_axis);
  double total = 0.0;
  // one partial sum per panel, reduced sequentially in row-major panel order
  for (std::size_t pi = 0; pi < panels; ++pi) {
    for (std::size_t pj = 0; pj < panels; ++pj) {
      double panel_sum = 0.0;
      for (std::size_t i = pi * n; i < (pi + 1) * n; ++i) {
        for (std::size_t j = pj * n; j < (pj + 1) * n; ++j) {
          double v;
          try {
            v = g(p1[i], p2[j]);
          } catch (const Error& err) {
            throw EvalError(std::string(err.what()) + " [at quadrature node z = (" +
                            std::to_string(p1[i]) + ", " + std::to_string(p2[j]) + ")]");
          }
          panel_sum += w1[i] * w2[j] * v;
        }
      }
      total += panel_sum;
    }
  }
  return total;
}

/// Oriented double integral: the bounds may be reversed (upper < lower), in
/// which case the sign flips per reversed axis, matching the usual iterated
/// integral convention.
template <class F>
double integrate2d_oriented(F&& g, double a1, double b1, double a2, double b2,
                            const QuadratureRule& rule = {}) {
  double sign = 1.0;
  if (b1 < a1) {
    std::swap(a1, b1);
    sign = -sign;
  }
  if (b2 < a2) {
    std::swap(a2, b2);
    sign = -sign;
  }
  if (a1 == b1 || a2 == b2) return 0.0;
  return sign * integrate2d(g, CharRectangle{a1, b1, a2, b2}, rule);
}

/// Oriented single integral.
template <class F>
double integrate1d_oriented(F&& g, double a, double b, const QuadratureRule& rule = {}) {
  if (a == b) return 0.0;
  if (b < a) return -integrate1d(g, b, a, rule);
  return integrate1d(g, a, b, rule);
}

}  // namespace ccp
