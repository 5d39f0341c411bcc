#pragma once
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dq/scalar.hpp"

namespace dq {

using Expo = std::vector<int>;  // exponent vector, length == dim

/**
 * Sparse multivariate polynomial over Scalar.
 *
 * Terms live in an ordered map keyed by exponent vector, so iteration order
 * (and hence printing) is canonical and zero coefficients are never stored.
 */
class Poly {
 public:
  explicit Poly(int dim = 0) : dim_(dim) {}

  static Poly constant(int dim, const Scalar& c);
  static Poly variable(int dim, int idx);
  static Poly monomial(int dim, Expo e, const Scalar& c);

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  const std::map<Expo, Scalar>& terms() const { return terms_; }

  // coefficient of a given monomial (zero if absent)
  Scalar coeff(const Expo& e) const;
  // constant term
  Scalar constant_term() const { return coeff(Expo(dim_, 0)); }

  void add_term(const Expo& e, const Scalar& c);  // accumulate, prune zeros

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Scalar& s, Poly p);
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly derivative(int var) const;
  Poly derivative(const Expo& multi) const;  // iterated partials
  Poly pow(int e) const;

  // dest += s * a * b without building intermediates for the common hot path
  static void acc_mul(Poly& dest, const Scalar& s, const Poly& a, const Poly& b);

  std::string str(const std::vector<std::string>& names) const;

 private:
  int dim_;
  std::map<Expo, Scalar> terms_;
};

// default variable names x1..xd
std::vector<std::string> default_names(int dim);

}  // namespace dq
