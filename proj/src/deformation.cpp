#include "dq/deformation.hpp"

#include <algorithm>

#include "dq/error.hpp"

namespace dq {

namespace {

// sum over j+k=r of inserts of the listed cochains, combined by `shape`:
// associative shape is slot0 - slot1, cyclic shape is the jacobi sum
PolyDiffOp defect_sum(const std::vector<PolyDiffOp>& c, int r, int lo, bool cyclic, int dim) {
  PolyDiffOp out(3, dim);
  for (int j = lo; j <= r - lo; ++j) {
    int k = r - j;
    if (j >= static_cast<int>(c.size()) || k >= static_cast<int>(c.size())) continue;
    if (c[j].is_zero() || c[k].is_zero()) continue;
    PolyDiffOp head = c[j].insert(0, c[k]);  // (u,v,w) -> C_j(C_k(u,v),w)
    if (cyclic) {
      out += head;
      out += head.permute_args({1, 2, 0});  // C_j(C_k(v,w),u)
      out += head.permute_args({2, 0, 1});  // C_j(C_k(w,u),v)
    } else {
      out += head;
      out -= c[j].insert(1, c[k]);  // C_j(u,C_k(v,w))
    }
  }
  return out;
}

}  // namespace

StarProduct::StarProduct(int dim, int order) : dim_(dim), order_(order) {
  require(order >= 0, "negative order");
  cochains_.reserve(order + 1);
  cochains_.push_back(PolyDiffOp::multiplication(dim));
  for (int r = 1; r <= order; ++r) cochains_.emplace_back(2, dim);
}

const PolyDiffOp& StarProduct::cochain(int r) const {
  require(r >= 0 && r <= order_, "cochain order out of range");
  return cochains_[r];
}

void StarProduct::set_cochain(int r, const PolyDiffOp& c) {
  require(r >= 1 && r <= order_, "cochain order out of range");
  require(c.arity() == 2 && c.dim() == dim_, "cochain must be binary in the same variables");
  cochains_[r] = c;
}

LambdaSeries StarProduct::multiply(const Poly& u, const Poly& v) const {
  require(u.dim() == dim_ && v.dim() == dim_, "argument dimension mismatch");
  LambdaSeries s(dim_, order_, Sym::lambda);
  for (int r = 0; r <= order_; ++r) s.set_coeff(r, cochains_[r].apply({u, v}));
  return s;
}

LambdaSeries StarProduct::multiply(const LambdaSeries& u, const LambdaSeries& v) const {
  require(u.dim() == dim_ && v.dim() == dim_, "argument dimension mismatch");
  require(u.sym() == Sym::lambda && v.sym() == Sym::lambda,
          "star cochains pair with powers of L");
  int tr = std::min({u.trunc(), v.trunc(), order_});
  LambdaSeries s(dim_, tr, Sym::lambda);
  for (int c = 0; c <= order_; ++c) {
    if (cochains_[c].is_zero()) continue;
    for (int a = -u.neg_size(); a <= u.trunc(); ++a) {
      if (u.coeff(a).is_zero()) continue;
      for (int b = -v.neg_size(); b <= v.trunc(); ++b) {
        int k = c + a + b;
        if (k > tr) continue;
        if (v.coeff(b).is_zero()) continue;
        s.add_coeff(k, cochains_[c].apply({u.coeff(a), v.coeff(b)}));
      }
    }
  }
  return s;
}

PolyDiffOp StarProduct::associativity_defect(int r) const {
  require(r >= 1 && r <= order_, "defect order out of range");
  return defect_sum(cochains_, r, 0, false, dim_);
}

PolyDiffOp StarProduct::interior_defect(int r) const {
  require(r >= 1 && r <= order_ + 1, "defect order out of range");
  return defect_sum(cochains_, r, 1, false, dim_);
}

bool StarProduct::is_associative() const {
  for (int r = 1; r <= order_; ++r)
    if (!associativity_defect(r).is_zero()) return false;
  return true;
}

StarProduct StarProduct::opposite() const {
  StarProduct s(dim_, order_);
  for (int r = 1; r <= order_; ++r) s.cochains_[r] = cochains_[r].permute_args({1, 0});
  return s;
}

PolyDiffOp StarProduct::commutator_cochain(int r) const {
  require(r >= 0 && r <= order_, "cochain order out of range");
  return cochains_[r] - cochains_[r].permute_args({1, 0});
}

PolyDiffOp StarProduct::closedness_defect(int r) const {
  return adjoint_normal_form(commutator_cochain(r));
}

BracketDeformation::BracketDeformation(int dim, int order) : dim_(dim), order_(order) {
  require(order >= 0, "negative order");
  for (int r = 0; r <= order; ++r) cochains_.emplace_back(2, dim);
}

const PolyDiffOp& BracketDeformation::cochain(int r) const {
  require(r >= 0 && r <= order_, "cochain order out of range");
  return cochains_[r];
}

void BracketDeformation::set_cochain(int r, const PolyDiffOp& b) {
  require(r >= 0 && r <= order_, "cochain order out of range");
  require(b.arity() == 2 && b.dim() == dim_, "cochain must be binary in the same variables");
  require(b.is_antisymmetric(), "bracket cochains must be antisymmetric");
  cochains_[r] = b;
}

LambdaSeries BracketDeformation::bracket(const Poly& u, const Poly& v) const {
  require(u.dim() == dim_ && v.dim() == dim_, "argument dimension mismatch");
  LambdaSeries s(dim_, order_, Sym::lambda);
  for (int r = 0; r <= order_; ++r) s.set_coeff(r, cochains_[r].apply({u, v}));
  return s;
}

PolyDiffOp BracketDeformation::jacobi_defect(int r) const {
  require(r >= 0 && r <= order_, "defect order out of range");
  return defect_sum(cochains_, r, 0, true, dim_);
}

PolyDiffOp BracketDeformation::interior_defect(int r) const {
  require(r >= 1 && r <= order_ + 1, "defect order out of range");
  return defect_sum(cochains_, r, 1, true, dim_);
}

bool BracketDeformation::is_lie() const {
  for (int r = 0; r <= order_; ++r)
    if (!jacobi_defect(r).is_zero()) return false;
  return true;
}

BracketDeformation commutator_bracket(const StarProduct& s) {
  require(s.order() >= 1, "commutator bracket needs at least order one");
  BracketDeformation b(s.dim(), s.order() - 1);
  Scalar half = Scalar::ratio(1, 2);
  for (int r = 1; r <= s.order(); ++r) b.set_cochain(r - 1, half * s.commutator_cochain(r));
  return b;
}

StarProduct apply_equivalence(const StarProduct& s, const std::vector<PolyDiffOp>& t) {
  int dim = s.dim(), n = s.order();
  for (auto& op : t)
    require(op.arity() == 1 && op.dim() == dim, "gauge terms must be unary in the same variables");
  auto tt = [&](int r) -> PolyDiffOp {
    if (r == 0) return PolyDiffOp::identity(dim);
    if (r <= static_cast<int>(t.size())) return t[r - 1];
    return PolyDiffOp(1, dim);
  };
  StarProduct out(dim, n);
  for (int r = 1; r <= n; ++r) {
    PolyDiffOp acc(2, dim);
    for (int c = 0; c <= r; ++c) {
      for (int e = 0; e + c <= r; ++e) {
        int f = r - c - e;
        if (s.cochain(c).is_zero()) continue;
        PolyDiffOp term = s.cochain(c);
        if (e > 0) {
          if (tt(e).is_zero()) continue;
          term = term.insert(0, tt(e));
        }
        if (f > 0) {
          if (tt(f).is_zero()) continue;
          term = term.insert(1, tt(f));
        }
        acc += term;
      }
    }
    for (int a = 1; a <= r; ++a) {
      if (tt(a).is_zero() || out.cochain(r - a).is_zero()) continue;
      acc -= tt(a).insert(0, out.cochain(r - a));
    }
    out.set_cochain(r, acc);
  }
  return out;
}

}  // namespace dq
