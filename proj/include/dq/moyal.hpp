#pragma once
#include <vector>

#include "dq/deformation.hpp"
#include "dq/parse.hpp"
#include "dq/polydiff.hpp"

namespace dq {

/**
 * Flat phase space R^{2l} with variables (q_1..q_l, p_1..p_l) and the
 * canonical constant bracket {q_a, p_a} = +1.
 */
class FlatSymplectic {
 public:
  explicit FlatSymplectic(int dof);

  int dof() const { return dof_; }
  int dim() const { return 2 * dof_; }
  VarTable vars() const;                    // q/p names and aliases
  PoissonStructure poisson() const;         // the block bracket
  Scalar pairing(int i, int j) const;       // {x_i, x_j} as a constant

 private:
  int dof_;
};

// r-fold contraction of the canonical bracket, as an operator and applied:
// sum over multi-indices |mu|+|nu| = r of (-1)^{|nu|} r!/(mu! nu!)
// (d_q^mu d_p^nu u)(d_p^mu d_q^nu v)
PolyDiffOp p_power_op(const FlatSymplectic& fs, int r);
Poly p_power(const FlatSymplectic& fs, int r, const Poly& u, const Poly& v);

// u * v = sum_r (L^r/r!) P^r(u,v), the exponential of the bracket
StarProduct moyal_star(const FlatSymplectic& fs, int order);
LambdaSeries moyal_star(const FlatSymplectic& fs, const Poly& u, const Poly& v, int order);

// [u,v] = sum over odd r of (L^{r-1}/r!) P^r(u,v): cochain B_{2k} = P^{2k+1}/(2k+1)!
BracketDeformation moyal_bracket(const FlatSymplectic& fs, int order);
LambdaSeries moyal_bracket(const FlatSymplectic& fs, const Poly& u, const Poly& v, int order);

enum class Ordering { weyl, standard, normal };

// symbol products of the three operator orderings; weyl is the exponential
// star above, standard is sum (2L)^|mu|/mu! d_q^mu u d_p^mu v, normal is the
// same shape in the complex pair a = q+ip, abar = q-ip with coefficient 4iL
StarProduct ordered_star(Ordering kind, const FlatSymplectic& fs, int order);
LambdaSeries ordered_star(Ordering kind, const FlatSymplectic& fs, const Poly& u,
                          const Poly& v, int order);

// gauge terms T_1..T_order of the operator T = exp(c L G) with
// apply_equivalence(weyl product, T) == ordered_star(kind) cochain by
// cochain; rejects kind == weyl
std::vector<PolyDiffOp> ordering_equivalence(Ordering kind, const FlatSymplectic& fs,
                                             int order);

}  // namespace dq
