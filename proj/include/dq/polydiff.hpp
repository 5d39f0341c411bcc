#pragma once
#include <map>
#include <string>
#include <vector>

#include "dq/poly.hpp"

namespace dq {

/**
 * Polydifferential operator: finite sum of terms
 *
 *   coeff(x) * d^{m_0}(arg_0) * d^{m_1}(arg_1) * ... * d^{m_{k-1}}(arg_{k-1})
 *
 * keyed by the tuple of multi-indices, so identical derivative signatures
 * merge and the zero operator has an empty term map.  Composition is fully
 * symbolic (Leibniz splitting with exact multinomials), which is what makes
 * the coboundary and defect computations exact instead of pointwise.
 */
class PolyDiffOp {
 public:
  using Key = std::vector<Expo>;  // one multi-index per argument slot

  PolyDiffOp(int arity, int dim);
  static PolyDiffOp multiplication(int dim);  // (u,v) -> uv
  static PolyDiffOp identity(int dim);        // u -> u

  int arity() const { return arity_; }
  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Poly>& terms() const { return terms_; }

  void add_term(const Key& derivs, const Poly& coeff);

  PolyDiffOp operator-() const;
  PolyDiffOp& operator+=(const PolyDiffOp& o);
  PolyDiffOp& operator-=(const PolyDiffOp& o);
  friend PolyDiffOp operator+(PolyDiffOp a, const PolyDiffOp& b) { return a += b; }
  friend PolyDiffOp operator-(PolyDiffOp a, const PolyDiffOp& b) { return a -= b; }
  friend PolyDiffOp operator*(const Scalar& s, PolyDiffOp d);
  friend bool operator==(const PolyDiffOp& a, const PolyDiffOp& b) {
    return a.arity_ == b.arity_ && a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const PolyDiffOp& a, const PolyDiffOp& b) { return !(a == b); }

  Poly apply(const std::vector<Poly>& args) const;

  // substitute `inner`'s output into argument slot `slot` (no signs applied)
  PolyDiffOp insert(int slot, const PolyDiffOp& inner) const;

  // E with E(f_0,...,f_{k-1}) = this(f_{perm[0]},...,f_{perm[k-1]})
  PolyDiffOp permute_args(const std::vector<int>& perm) const;

  bool is_antisymmetric() const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  int arity_;
  int dim_;
  std::map<Key, Poly> terms_;
};

// Gerstenhaber composition and bracket on the shifted grading |D| = arity-1
PolyDiffOp gerstenhaber_compose(const PolyDiffOp& a, const PolyDiffOp& b);
PolyDiffOp gerstenhaber_bracket(const PolyDiffOp& a, const PolyDiffOp& b);

// Hochschild coboundary of a p-cochain (the associative-case differential):
// (bC)(u_0..u_p) = u_0 C(u_1..u_p) - C(u_0 u_1, u_2..) + ... +
//                  (-1)^p C(u_0,..,u_{p-1} u_p) + (-1)^{p+1} C(u_0..u_{p-1}) u_p
PolyDiffOp hochschild_coboundary(const PolyDiffOp& c);

/**
 * Antisymmetric polyvector field of fixed degree with Poly components,
 * stored on strictly increasing index tuples.
 */
class PolyVector {
 public:
  PolyVector(int degree, int dim);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  bool is_zero() const { return comps_.empty(); }
  const std::map<std::vector<int>, Poly>& components() const { return comps_; }

  // tuple in any order; sign-normalized, repeated indices vanish
  void add_component(std::vector<int> idx, const Poly& c);
  Poly component(std::vector<int> idx) const;  // signed lookup

  PolyVector& operator+=(const PolyVector& o);
  friend PolyVector operator+(PolyVector a, const PolyVector& b) { return a += b; }
  friend PolyVector operator*(const Scalar& s, PolyVector v);
  friend bool operator==(const PolyVector& a, const PolyVector& b) {
    return a.degree_ == b.degree_ && a.dim_ == b.dim_ && a.comps_ == b.comps_;
  }
  friend bool operator!=(const PolyVector& a, const PolyVector& b) { return !(a == b); }

 private:
  int degree_;
  int dim_;
  std::map<std::vector<int>, Poly> comps_;
};

// Schouten bracket of a k-vector and an l-vector (k,l >= 1), computed
// term-by-term on coordinate decomposables
PolyVector schouten_bracket(const PolyVector& a, const PolyVector& b);

// multidifferential injection xi_1 ^..^ xi_k |-> (1/k!) det(xi_i(f_j))
PolyDiffOp hkr_inject(const PolyVector& xi);

/** Bivector given by an antisymmetric matrix of polynomial components. */
class PoissonStructure {
 public:
  PoissonStructure(int dim, std::vector<std::vector<Poly>> mat);
  // block structure with {q_a, p_a} = +1 on variables (q_1..q_l, p_1..p_l)
  static PoissonStructure standard(int dof);
  // linear structure a^{ij} = sum_k eps_{ijk} x_k on three variables
  static PoissonStructure so3();

  int dim() const { return dim_; }
  const Poly& matrix(int i, int j) const { return mat_[i][j]; }

  Poly bracket(const Poly& u, const Poly& v) const;
  PolyDiffOp as_operator() const;  // (u,v) -> sum a^{ij} d_i u d_j v
  PolyVector as_bivector() const;
  PolyVector jacobi_defect() const;  // Schouten square, zero iff Poisson
  bool is_poisson() const { return jacobi_defect().is_zero(); }

 private:
  int dim_;
  std::vector<std::vector<Poly>> mat_;
};

// Chevalley-Eilenberg coboundary of an antisymmetric p-cochain for the Lie
// algebra (polys, Poisson bracket):
// (dB)(u_0..u_p) = sum_j (-1)^j {u_j, B(..no j..)}
//                + sum_{i<j} (-1)^{i+j} B({u_i,u_j}, ..no i,j..)
PolyDiffOp chevalley_coboundary(const PolyDiffOp& b, const PoissonStructure& p);

// For an arity-2 operator, integrate all derivatives off the first slot by
// parts; the operator annihilates integrals of both slots iff this is zero.
PolyDiffOp adjoint_normal_form(const PolyDiffOp& a);

}  // namespace dq
