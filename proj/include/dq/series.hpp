#pragma once
#include <string>
#include <vector>

#include "dq/poly.hpp"

namespace dq {

// formal variable of a series: the deformation parameter or (after
// substitution lambda = (i/2) h) the physical constant
enum class Sym { lambda, hbar };

/**
 * Truncated formal series in one central symbol with Poly coefficients.
 *
 * Coefficients are known exactly for powers in the window [-neg, trunc]
 * where neg is the current length of the negative tail.  Products follow
 * the fixed rule: result truncation = min of the operands' truncations,
 * negative tails shift into positive slots.
 */
class LambdaSeries {
 public:
  LambdaSeries(int dim, int trunc, Sym sym = Sym::lambda);
  static LambdaSeries from_poly(const Poly& p, int trunc, Sym sym = Sym::lambda);

  int dim() const { return dim_; }
  int trunc() const { return trunc_; }
  Sym sym() const { return sym_; }
  int neg_size() const { return static_cast<int>(neg_.size()); }

  // k may be negative; out-of-window reads on the negative side give zero
  const Poly& coeff(int k) const;
  void set_coeff(int k, Poly p);
  void add_coeff(int k, const Poly& p);

  bool is_zero() const;

  LambdaSeries operator-() const;
  LambdaSeries& operator+=(const LambdaSeries& o);
  LambdaSeries& operator-=(const LambdaSeries& o);
  friend LambdaSeries operator+(LambdaSeries a, const LambdaSeries& b) { return a += b; }
  friend LambdaSeries operator-(LambdaSeries a, const LambdaSeries& b) { return a -= b; }
  friend LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b);
  friend LambdaSeries operator*(const Scalar& s, LambdaSeries a);
  friend bool operator==(const LambdaSeries& a, const LambdaSeries& b);
  friend bool operator!=(const LambdaSeries& a, const LambdaSeries& b) { return !(a == b); }

  // reindex powers by +k (window moves with the data, nothing is lost)
  LambdaSeries shift(int k) const;
  // exact division by sym^k: like shift(-k) but errors if a nonzero
  // coefficient would fall below power zero
  LambdaSeries checked_div(int k) const;
  LambdaSeries truncate(int new_trunc) const;

  // lambda -> (i/2) h: coefficient of power k picks up (i/2)^k.
  // Negative powers require allow_neg (they invert h).
  LambdaSeries substitute_hbar(bool allow_neg = false) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  int dim_;
  int trunc_;
  Sym sym_;
  std::vector<Poly> coeffs_;  // index k <-> power k
  std::vector<Poly> neg_;     // index k <-> power -(k+1)
  Poly zero_;                 // returned for reads below the negative tail
  void prune_neg();
};

}  // namespace dq
