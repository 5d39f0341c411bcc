#include "dq/poly.hpp"

#include <numeric>

#include "dq/error.hpp"

namespace dq {

Poly Poly::constant(int dim, const Scalar& c) {
  Poly p(dim);
  p.add_term(Expo(dim, 0), c);
  return p;
}

Poly Poly::variable(int dim, int idx) {
  require(idx >= 0 && idx < dim, "variable index out of range");
  Expo e(dim, 0);
  e[idx] = 1;
  return monomial(dim, e, Scalar(1));
}

Poly Poly::monomial(int dim, Expo e, const Scalar& c) {
  require(static_cast<int>(e.size()) == dim, "exponent vector length mismatch");
  Poly p(dim);
  p.add_term(e, c);
  return p;
}

int Poly::total_degree() const {
  int d = 0;
  for (auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

Scalar Poly::coeff(const Expo& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void Poly::add_term(const Expo& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r(dim_);
  for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  require(dim_ == o.dim_, "polynomial dimension mismatch");
  for (auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require(dim_ == o.dim_, "polynomial dimension mismatch");
  for (auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r(a.dim_);
  Poly::acc_mul(r, Scalar(1), a, b);
  return r;
}

Poly operator*(const Scalar& s, Poly p) {
  if (s.is_zero()) return Poly(p.dim_);
  for (auto& [e, c] : p.terms_) c *= s;
  return p;
}

void Poly::acc_mul(Poly& dest, const Scalar& s, const Poly& a, const Poly& b) {
  require(a.dim_ == b.dim_ && a.dim_ == dest.dim_, "polynomial dimension mismatch");
  if (s.is_zero()) return;
  Expo e(a.dim_);
  for (auto& [ea, ca] : a.terms_) {
    Scalar sca = s * ca;
    for (auto& [eb, cb] : b.terms_) {
      for (int k = 0; k < a.dim_; ++k) e[k] = ea[k] + eb[k];
      dest.add_term(e, sca * cb);
    }
  }
}

Poly Poly::derivative(int var) const {
  require(var >= 0 && var < dim_, "derivative variable out of range");
  Poly r(dim_);
  for (auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Expo f = e;
    f[var] -= 1;
    r.add_term(f, Scalar(e[var]) * c);
  }
  return r;
}

Poly Poly::derivative(const Expo& multi) const {
  require(static_cast<int>(multi.size()) == dim_, "multi-index length mismatch");
  Poly r = *this;
  for (int v = 0; v < dim_; ++v)
    for (int k = 0; k < multi[v]; ++k) {
      if (r.is_zero()) return r;
      r = r.derivative(v);
    }
  return r;
}

Poly Poly::pow(int e) const {
  require(e >= 0, "polynomial to negative power");
  Poly acc = constant(dim_, Scalar(1));
  for (int k = 0; k < e; ++k) acc = acc * *this;
  return acc;
}

std::vector<std::string> default_names(int dim) {
  std::vector<std::string> names;
  for (int k = 1; k <= dim; ++k) names.push_back("x" + std::to_string(k));
  return names;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  require(static_cast<int>(names.size()) >= dim_, "not enough variable names");
  if (terms_.empty()) return "0";
  std::string out;
  // highest exponents first reads like handwritten math
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (int v = 0; v < dim_; ++v) {
      if (e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    std::string cs;
    if (mono.empty()) {
      cs = c.str();
    } else if (c == Scalar(1)) {
      cs = mono;
    } else if (c == -Scalar(1)) {
      cs = "-" + mono;
    } else {
      cs = c.str() + "*" + mono;
    }
    if (out.empty()) {
      out = cs;
    } else if (!cs.empty() && cs[0] == '-') {
      out += " - " + cs.substr(1);
    } else {
      out += " + " + cs;
    }
  }
  return out;
}

}  // namespace dq
