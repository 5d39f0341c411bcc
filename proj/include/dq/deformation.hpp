#pragma once
#include <vector>

#include "dq/polydiff.hpp"
#include "dq/series.hpp"

namespace dq {

/**
 * Formal associative deformation of the polynomial product,
 *
 *   u * v = sum_{r=0}^{order} L^r C_r(u, v),
 *
 * with C_0 the pointwise multiplication and the higher cochains arbitrary
 * arity-2 polydifferential operators.  All defects are computed as exact
 * operator identities, not pointwise.
 */
class StarProduct {
 public:
  StarProduct(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  const PolyDiffOp& cochain(int r) const;
  void set_cochain(int r, const PolyDiffOp& c);  // r >= 1

  LambdaSeries multiply(const Poly& u, const Poly& v) const;
  LambdaSeries multiply(const LambdaSeries& u, const LambdaSeries& v) const;

  // F_r(u,v,w) = sum_{j+k=r} [ C_j(C_k(u,v),w) - C_j(u,C_k(v,w)) ], r <= order
  PolyDiffOp associativity_defect(int r) const;
  // the j,k >= 1 part of F_r, so F_r = interior_defect(r) - b(C_r); defined
  // up to r = order+1, where it is the obstruction to extending one order
  PolyDiffOp interior_defect(int r) const;
  bool is_associative() const;

  StarProduct opposite() const;                // arguments swapped in each C_r
  PolyDiffOp commutator_cochain(int r) const;  // C_r - C_r with swapped args
  // integration-by-parts reduction of the commutator cochain; the zero
  // operator certifies that integrals trace the product at this order
  PolyDiffOp closedness_defect(int r) const;

 private:
  int dim_;
  int order_;
  std::vector<PolyDiffOp> cochains_;
};

/**
 * Formal Lie deformation [u,v] = sum_{r=0}^{order} L^r B_r(u,v) with
 * antisymmetric cochains; B_0 is typically a Poisson bracket.
 */
class BracketDeformation {
 public:
  BracketDeformation(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  const PolyDiffOp& cochain(int r) const;
  void set_cochain(int r, const PolyDiffOp& b);  // must be antisymmetric

  LambdaSeries bracket(const Poly& u, const Poly& v) const;

  // G_r(u,v,w) = sum_{j+k=r} [ B_j(B_k(u,v),w) + B_j(B_k(v,w),u)
  //                            + B_j(B_k(w,u),v) ],  r <= order
  PolyDiffOp jacobi_defect(int r) const;
  // the j,k >= 1 part of G_r; with B_0 a Poisson operator P this gives
  // G_r = interior_defect(r) - (chevalley coboundary of B_r w.r.t. P)
  PolyDiffOp interior_defect(int r) const;
  bool is_lie() const;

 private:
  int dim_;
  int order_;
  std::vector<PolyDiffOp> cochains_;
};

// commutator bracket of a star product scaled by 1/(2L): the order drops by
// one, B_{r-1} = (C_r - C_r with swapped args)/2
BracketDeformation commutator_bracket(const StarProduct& s);

// gauge transform by T = I + sum_{r>=1} L^r T_r with t[r-1] = T_r (arity-1
// operators, missing entries zero): the product *' with T(u *' v) = Tu * Tv
StarProduct apply_equivalence(const StarProduct& s, const std::vector<PolyDiffOp>& t);

}  // namespace dq
