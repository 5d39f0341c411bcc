#pragma once
#include <string>
#include <vector>

#include "dq/moyal.hpp"
#include "dq/poly.hpp"
#include "dq/series.hpp"

namespace dq {

/**
 * Quadratic Hamiltonian H = sum_a (alpha p_a^2 + beta p_a q_a + gamma q_a^2)
 * over `dof` canonical pairs, with rational coefficients.  The sign of the
 * discriminant d (the determinant of the quadratic form, alpha*gamma -
 * beta^2/4 in this cross-term normalization) picks the trigonometric
 * (d > 0), polynomial (d = 0) or hyperbolic (d < 0) branch of the
 * exponential flow.
 */
struct QuadHamiltonian {
  Scalar alpha, beta, gamma;
  int dof;

  QuadHamiltonian(const Scalar& a, const Scalar& b, const Scalar& g, int dof);

  Scalar discriminant() const;  // alpha*gamma - beta^2/4
  // radial class: beta = 0 and alpha = gamma, so H is a function of
  // sum (q_a^2 + p_a^2) with a single scale
  bool is_isotropic() const;
  Poly polynomial() const;  // in the (q_1..q_l, p_1..p_l) variable order
};

/**
 * Truncated expansion in a time parameter t; the coefficient of t^n is a
 * physical-constant series (Sym::hbar), possibly with negative powers.
 */
class TimeSeries {
 public:
  TimeSeries(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  const LambdaSeries& coeff(int n) const;
  void set_coeff(int n, LambdaSeries s);

  friend bool operator==(const TimeSeries& a, const TimeSeries& b);
  friend bool operator!=(const TimeSeries& a, const TimeSeries& b) { return !(a == b); }

  // one line per t-power: "t^n: <coefficient>"
  std::string str(const std::vector<std::string>& names) const;

 private:
  int dim_;
  int order_;
  std::vector<LambdaSeries> coeffs_;
};

// n-fold product h * h * ... * h at series truncation `order`, h^{*0} = 1.
// For quadratic h the result is exact once order >= n: every cochain beyond
// the second annihilates a quadratic factor.
LambdaSeries star_power(const FlatSymplectic& fs, const Poly& h, int n, int order);

// Exp(h t) = sum_n (t^n/n!) (h/(i hbar))^{*n}: the t^n coefficient is
// i^{-n}/n! times the n-th star power with lambda = (i/2) hbar substituted
// and the powers lowered by n.  Requires lambda_order >= t_order so that
// every coefficient keeps a nonnegative truncation window.
TimeSeries star_exponential(const FlatSymplectic& fs, const Poly& h, int t_order,
                            int lambda_order);

// Taylor expansion in t of c(t)^{-dof} exp((H/(i hbar)) tau(t)) where
// c(t) = sum_k (-d)^k t^{2k}/(2k)! and tau solves tau' = 1 + d tau^2,
// tau(0) = 0.  One formula covers all three signs of d: for d > 0 this is
// cos/tan of sqrt(d) t, for d < 0 cosh/tanh, for d = 0 the plain exponential.
// Coefficient truncations match star_exponential(fs, H, M, M).
TimeSeries quadratic_closed_form(const QuadHamiltonian& hq, int t_order);

// exact comparison of the star-power route against the closed form through
// t^t_order; returns -1 on agreement, else the first mismatching t-power
int exp_matches_closed_form(const QuadHamiltonian& hq, int t_order);

/**
 * Radial phase-space function f = e^{s u} g(u) in the scaled energy
 * u = H/hbar of an isotropic quadratic Hamiltonian; g is a one-variable
 * polynomial.  The class is closed under d/dH and under the star product,
 * which is what makes exact spectral work possible.
 */
struct RadialFunction {
  Scalar s;  // rational exponent rate
  Poly g;    // polynomial part, dim 1

  RadialFunction(const Scalar& s, Poly g);
  static RadialFunction zero() { return RadialFunction(Scalar(0), Poly(1)); }

  bool is_zero() const { return g.is_zero(); }
  friend bool operator==(const RadialFunction& a, const RadialFunction& b) {
    return (a.g.is_zero() && b.g.is_zero()) || (a.s == b.s && a.g == b.g);
  }
  friend bool operator!=(const RadialFunction& a, const RadialFunction& b) {
    return !(a == b);
  }

  std::string str() const;  // "(g(u)) * exp(s*u), u = H/h"
};

// (H * f - E f)/hbar for H isotropic with alpha = gamma = a, beta = 0 and
// E = e*hbar, computed through the exact reduction
//   H * f(H) = H f + 4 a^2 L^2 (H f'' + f')       (derivatives in H)
// which in u-units and with f = e^{s u} g(u) becomes the polynomial identity
//   defect_g = u g - a^2 (u s^2 g + 2 u s g' + u g'' + s g + g') - e g.
// The returned function has the same exponent s; it vanishes exactly when
// the eigen-equation H * f = E f holds.
RadialFunction star_eigen_defect(const QuadHamiltonian& hq, const RadialFunction& f,
                                 const Scalar& e);

// product of radial Gaussians under the canonical star product:
//   e^{s1 u} * e^{s2 u} = (1/K) e^{((s1+s2)/K) u},  K = 1 + s1 s2 / 4,
// extended to polynomial prefactors by differentiating the law in the two
// exponent rates (a finite jet, so the result is exact).  K = 0 means the
// product leaves the radial Gaussian class and is rejected.
RadialFunction gaussian_star(const RadialFunction& f1, const RadialFunction& f2);

/**
 * Discrete spectrum of the isotropic harmonic Hamiltonian
 * H = (1/2) sum_a (p_a^2 + q_a^2): eigenvalues (n + dof/2) hbar.  For one
 * degree of freedom each eigenvalue ships with its eigenprojector
 * 2 (-1)^n e^{-2u} L_n(4u), found by the power-series solver below and
 * certified by a vanishing star_eigen_defect.
 */
struct SpectralData {
  int dof;
  std::vector<Scalar> eigenvalues;          // multipliers of hbar
  std::vector<RadialFunction> projectors;   // dof == 1 only, index n
};

SpectralData harmonic_spectrum(int dof, int n_max);

}  // namespace dq
