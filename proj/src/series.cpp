#include "dq/series.hpp"

#include <algorithm>

#include "dq/error.hpp"

namespace dq {

LambdaSeries::LambdaSeries(int dim, int trunc, Sym sym)
    : dim_(dim), trunc_(trunc), sym_(sym), coeffs_(trunc + 1, Poly(dim)), zero_(dim) {
  require(trunc >= 0, "series truncation must be nonnegative");
}

LambdaSeries LambdaSeries::from_poly(const Poly& p, int trunc, Sym sym) {
  LambdaSeries s(p.dim(), trunc, sym);
  s.coeffs_[0] = p;
  return s;
}

const Poly& LambdaSeries::coeff(int k) const {
  if (k >= 0) {
    require(k <= trunc_, "series coefficient beyond truncation");
    return coeffs_[k];
  }
  int idx = -k - 1;
  if (idx >= static_cast<int>(neg_.size())) return zero_;
  return neg_[idx];
}

void LambdaSeries::set_coeff(int k, Poly p) {
  require(p.dim() == dim_, "series coefficient dimension mismatch");
  if (k >= 0) {
    require(k <= trunc_, "series coefficient beyond truncation");
    coeffs_[k] = std::move(p);
    return;
  }
  int idx = -k - 1;
  if (idx >= static_cast<int>(neg_.size())) neg_.resize(idx + 1, Poly(dim_));
  neg_[idx] = std::move(p);
  prune_neg();
}

void LambdaSeries::add_coeff(int k, const Poly& p) {
  Poly q = coeff(k);
  q += p;
  set_coeff(k, std::move(q));
}

void LambdaSeries::prune_neg() {
  while (!neg_.empty() && neg_.back().is_zero()) neg_.pop_back();
}

bool LambdaSeries::is_zero() const {
  for (auto& p : coeffs_)
    if (!p.is_zero()) return false;
  for (auto& p : neg_)
    if (!p.is_zero()) return false;
  return true;
}

LambdaSeries LambdaSeries::operator-() const {
  LambdaSeries r = *this;
  for (auto& p : r.coeffs_) p = -p;
  for (auto& p : r.neg_) p = -p;
  return r;
}

LambdaSeries& LambdaSeries::operator+=(const LambdaSeries& o) {
  require(dim_ == o.dim_ && sym_ == o.sym_, "series shape mismatch");
  trunc_ = std::min(trunc_, o.trunc_);
  coeffs_.resize(trunc_ + 1, Poly(dim_));
  for (int k = 0; k <= trunc_; ++k) coeffs_[k] += o.coeffs_[k];
  if (neg_.size() < o.neg_.size()) neg_.resize(o.neg_.size(), Poly(dim_));
  for (size_t k = 0; k < o.neg_.size(); ++k) neg_[k] += o.neg_[k];
  prune_neg();
  return *this;
}

LambdaSeries& LambdaSeries::operator-=(const LambdaSeries& o) { return *this += -o; }

LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b) {
  require(a.dim_ == b.dim_ && a.sym_ == b.sym_, "series shape mismatch");
  int da = a.neg_size(), db = b.neg_size();
  LambdaSeries r(a.dim_, std::min(a.trunc_, b.trunc_), a.sym_);
  for (int i = -da; i <= a.trunc_; ++i) {
    const Poly& pa = a.coeff(i);
    if (pa.is_zero()) continue;
    for (int j = -db; j <= b.trunc_; ++j) {
      int k = i + j;
      if (k > r.trunc_) continue;
      const Poly& pb = b.coeff(j);
      if (pb.is_zero()) continue;
      Poly acc = r.coeff(k);
      Poly::acc_mul(acc, Scalar(1), pa, pb);
      r.set_coeff(k, std::move(acc));
    }
  }
  return r;
}

LambdaSeries operator*(const Scalar& s, LambdaSeries a) {
  for (auto& p : a.coeffs_) p = s * p;
  for (auto& p : a.neg_) p = s * p;
  a.prune_neg();
  return a;
}

bool operator==(const LambdaSeries& a, const LambdaSeries& b) {
  if (a.dim_ != b.dim_ || a.sym_ != b.sym_ || a.trunc_ != b.trunc_) return false;
  if (a.neg_ != b.neg_) return false;
  return a.coeffs_ == b.coeffs_;
}

LambdaSeries LambdaSeries::shift(int k) const {
  require(trunc_ + k >= 0, "shift would empty the series window");
  LambdaSeries r(dim_, trunc_ + k, sym_);
  for (int j = -neg_size(); j <= trunc_; ++j) {
    const Poly& p = coeff(j);
    if (!p.is_zero()) r.set_coeff(j + k, p);
  }
  return r;
}

LambdaSeries LambdaSeries::checked_div(int k) const {
  LambdaSeries r = shift(-k);
  require(r.neg_.empty(),
          "division pattern fails: nonzero coefficient below the divided power");
  return r;
}

LambdaSeries LambdaSeries::truncate(int new_trunc) const {
  require(new_trunc >= 0 && new_trunc <= trunc_, "bad truncation request");
  LambdaSeries r(dim_, new_trunc, sym_);
  for (int k = 0; k <= new_trunc; ++k) r.coeffs_[k] = coeffs_[k];
  r.neg_ = neg_;
  return r;
}

LambdaSeries LambdaSeries::substitute_hbar(bool allow_neg) const {
  require(sym_ == Sym::lambda, "substitution applies to lambda series");
  require(allow_neg || neg_.empty(),
          "negative powers present and h-inversion not requested");
  LambdaSeries r(dim_, trunc_, Sym::hbar);
  Scalar half_i = Scalar::i() * Scalar::ratio(1, 2);
  for (int k = -neg_size(); k <= trunc_; ++k) {
    const Poly& p = coeff(k);
    if (!p.is_zero()) r.set_coeff(k, half_i.pow(k) * p);
  }
  return r;
}

std::string LambdaSeries::str(const std::vector<std::string>& names) const {
  std::string sym = (sym_ == Sym::lambda) ? "L" : "h";
  std::string out;
  auto append = [&](int k, const Poly& p) {
    if (p.is_zero()) return;
    std::string piece;
    if (k == 0) {
      piece = p.str(names);
    } else {
      piece = "(" + p.str(names) + ")*" + sym;
      if (k != 1) piece += "^" + std::to_string(k);
    }
    if (!out.empty()) out += " + ";
    out += piece;
  };
  for (int k = -neg_size(); k <= trunc_; ++k) append(k, coeff(k));
  return out.empty() ? "0" : out;
}

}  // namespace dq
