#pragma once

// The canonical-form quantities assembled from an equation and a
// characteristic pair:
//
//   beta    = 2 (a g1_x1 g2_x1 + b (g2_x2 g1_x1 + g1_x2 g2_x1) + c g1_x2 g2_x2)
//   A g_i   = a g_i_x1x1 + 2 b g_i_x1x2 + c g_i_x2x2
//   K(z)    = f(x(z), u, p, q) - A g1 (p dx1/dy1 + q dx2/dy1)
//                              - A g2 (p dx1/dy2 + q dx2/dy2)
//   Ktilde  = K / beta
//
// where x(z) is the inverse coordinate map and p, q are the x-derivatives of
// the candidate solution. beta is the weight of the mixed derivative in
// characteristic coordinates; its vanishing means characteristic tangency
// and is reported as a degeneracy error.

#include <cmath>
#include <string>

#include "ccp/characteristics.hpp"
#include "ccp/problem.hpp"
#include "ccp/types.hpp"

namespace ccp {

class KernelContext {
 public:
  KernelContext(EquationSpec eq, CharacteristicPair pair)
      : eq_(std::move(eq)), pair_(std::move(pair)) {}

  const EquationSpec& equation() const { return eq_; }
  const CharacteristicPair& pair() const { return pair_; }

  /// Set the degeneracy floor to 1e-12 * max(1, |beta at the image of the
  /// rectangle center|).
  void set_degeneracy_scale(const CharRectangle& rect) {
    const Point xc = pair_.invert(rect.center());
    degeneracy_floor_ = 1e-12 * std::max(1.0, std::abs(beta_raw(xc)));
  }

  double degeneracy_floor() const { return degeneracy_floor_; }

  double beta_at(const Point& x) const {
    const double beta = beta_raw(x);
    if (std::abs(beta) < degeneracy_floor_)
      throw DegeneracyError("kernel: beta degenerate (" + std::to_string(beta) +
                                ", floor " + std::to_string(degeneracy_floor_) + ")",
                            x.x1, x.x2);
    return beta;
  }

  /// A applied to gamma_i (which = 1 or 2).
  double A_gamma_at(int which, const Point& x) const {
    const ScalarField2& g = which == 1 ? pair_.gamma1() : pair_.gamma2();
    return eq_.a_at(x) * g.d2(0, 0, x) + 2.0 * eq_.b_at(x) * g.d2(0, 1, x) +
           eq_.c_at(x) * g.d2(1, 1, x);
  }

  /// K at characteristic coordinates z for candidate values (u, p, q),
  /// p = u_x1 and q = u_x2 at x(z).
  double K_at(const Point& z, double u, double p, double q) const {
    const Point x = pair_.invert(z);
    return K_at_x(z, x, u, p, q);
  }

  /// Same with x = invert(z) precomputed.
  double K_at_x(const Point& z, const Point& x, double u, double p, double q) const {
    const Jac2 inv = pair_.inverse_jacobian_at_x(x, z);
    const double Ag1 = A_gamma_at(1, x);
    const double Ag2 = A_gamma_at(2, x);
    return eq_.f_at(x, u, p, q) - Ag1 * (p * inv.a11 + q * inv.a21) -
           Ag2 * (p * inv.a12 + q * inv.a22);
  }

  double K_tilde_at(const Point& z, double u, double p, double q) const {
    const Point x = pair_.invert(z);
    return K_at_x(z, x, u, p, q) / beta_at(x);
  }

  double K_tilde_at_x(const Point& z, const Point& x, double u, double p, double q) const {
    return K_at_x(z, x, u, p, q) / beta_at(x);
  }

 private:
  double beta_raw(const Point& x) const {
    const Jac2 J = pair_.forward_jacobian(x);
    // J rows: (g1_x1, g1_x2), (g2_x1, g2_x2)
    return 2.0 * (eq_.a_at(x) * J.a11 * J.a21 +
                  eq_.b_at(x) * (J.a22 * J.a11 + J.a12 * J.a21) +
                  eq_.c_at(x) * J.a12 * J.a22);
  }

  EquationSpec eq_;
  CharacteristicPair pair_;
  double degeneracy_floor_ = 1e-12;
};

}  // namespace ccp
