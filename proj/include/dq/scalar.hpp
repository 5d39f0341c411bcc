#pragma once
#include <gmpxx.h>

#include <string>

namespace dq {

/**
 * Exact Gaussian rational a + b*i.
 *
 * Both parts are GMP rationals kept in canonical form (coprime, positive
 * denominator), so equality is plain component comparison.  This is the only
 * coefficient type in the engine; no floating point leaks into the symbolic
 * layer.
 */
class Scalar {
 public:
  Scalar() : re_(0), im_(0) {}
  Scalar(long n) : re_(n), im_(0) {}
  Scalar(const mpq_class& re) : re_(re), im_(0) { re_.canonicalize(); }
  Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }
  static Scalar ratio(long num, long den);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar pow(long e) const;  // negative e inverts (throws on zero)

  // parseable text: "3", "-1/2", "i", "-2*i", "(1/2+3*i)"
  std::string str() const;
  // true when str() needs no parentheses as a leading factor
  bool is_simple() const { return im_ == 0 || re_ == 0; }

  double to_double() const { return re_.get_d(); }  // real part, for reporting only

 private:
  mpq_class re_, im_;
};

Scalar factorial(long n);
Scalar binomial(long n, long k);

}  // namespace dq
