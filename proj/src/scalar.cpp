#include "dq/scalar.hpp"

#include "dq/error.hpp"

namespace dq {

Scalar Scalar::ratio(long num, long den) {
  require(den != 0, "rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  mpq_class n = o.re_ * o.re_ + o.im_ * o.im_;
  require(n != 0, "division by zero scalar");
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / n;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar Scalar::pow(long e) const {
  if (e < 0) {
    require(!is_zero(), "zero scalar to negative power");
    return (Scalar(1) / *this).pow(-e);
  }
  Scalar acc(1), base = *this;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

namespace {
std::string q_str(const mpq_class& q) { return q.get_str(); }

// one signed component, e.g. "3/2" or "-2*i"
std::string part_str(const mpq_class& q, bool imag) {
  if (!imag) return q_str(q);
  if (q == 1) return "i";
  if (q == -1) return "-i";
  return q_str(q) + "*i";
}
}  // namespace

std::string Scalar::str() const {
  if (im_ == 0) return q_str(re_);
  if (re_ == 0) return part_str(im_, true);
  std::string s = "(" + q_str(re_);
  s += (im_ > 0) ? "+" : "-";
  mpq_class a = abs(im_);
  s += (a == 1) ? "i" : q_str(a) + "*i";
  s += ")";
  return s;
}

Scalar factorial(long n) {
  require(n >= 0, "factorial of negative integer");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Scalar(mpq_class(f));
}

Scalar binomial(long n, long k) {
  if (k < 0 || k > n) return Scalar(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Scalar(mpq_class(b));
}

}  // namespace dq
