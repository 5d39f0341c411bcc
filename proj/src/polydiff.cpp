#include "dq/polydiff.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "dq/error.hpp"

namespace dq {

namespace {

// all splittings of multi-index m into `parts` ordered summands, with the
// exact Leibniz multiplicity prod_v m[v]! / (p_0[v]! ... p_{parts-1}[v]!)
void for_each_split(const Expo& m, int parts,
                    const std::function<void(const std::vector<Expo>&, const Scalar&)>& fn) {
  int dim = static_cast<int>(m.size());
  std::vector<Expo> cur(parts, Expo(dim, 0));

  std::function<void(int, Scalar)> over_vars = [&](int v, Scalar weight) {
    if (v == dim) {
      fn(cur, weight);
      return;
    }
    // compositions of m[v] into `parts` nonnegative integers
    std::function<void(int, int, Scalar)> comp = [&](int part, int left, Scalar w) {
      if (part == parts - 1) {
        cur[part][v] = left;
        over_vars(v + 1, weight * w);
        cur[part][v] = 0;
        return;
      }
      for (int take = 0; take <= left; ++take) {
        cur[part][v] = take;
        comp(part + 1, left - take, w * binomial(left, take));
      }
      cur[part][v] = 0;
    };
    comp(0, m[v], Scalar(1));
  };
  over_vars(0, Scalar(1));
}

int perm_sign(std::vector<int> idx) {
  int sign = 1;
  for (size_t a = 0; a + 1 < idx.size(); ++a)
    for (size_t b = a + 1; b < idx.size(); ++b)
      if (idx[a] > idx[b]) sign = -sign;
  return sign;
}

}  // namespace

PolyDiffOp::PolyDiffOp(int arity, int dim) : arity_(arity), dim_(dim) {
  require(arity >= 1 && dim >= 1, "operator needs positive arity and dimension");
}

PolyDiffOp PolyDiffOp::multiplication(int dim) {
  PolyDiffOp m(2, dim);
  m.add_term({Expo(dim, 0), Expo(dim, 0)}, Poly::constant(dim, Scalar(1)));
  return m;
}

PolyDiffOp PolyDiffOp::identity(int dim) {
  PolyDiffOp e(1, dim);
  e.add_term({Expo(dim, 0)}, Poly::constant(dim, Scalar(1)));
  return e;
}

void PolyDiffOp::add_term(const Key& derivs, const Poly& coeff) {
  require(static_cast<int>(derivs.size()) == arity_, "derivative tuple arity mismatch");
  require(coeff.dim() == dim_, "coefficient dimension mismatch");
  if (coeff.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(derivs, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PolyDiffOp PolyDiffOp::operator-() const {
  PolyDiffOp r(arity_, dim_);
  for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

PolyDiffOp& PolyDiffOp::operator+=(const PolyDiffOp& o) {
  require(arity_ == o.arity_ && dim_ == o.dim_, "operator shape mismatch");
  for (auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

PolyDiffOp& PolyDiffOp::operator-=(const PolyDiffOp& o) {
  require(arity_ == o.arity_ && dim_ == o.dim_, "operator shape mismatch");
  for (auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

PolyDiffOp operator*(const Scalar& s, PolyDiffOp d) {
  if (s.is_zero()) return PolyDiffOp(d.arity_, d.dim_);
  for (auto& [k, c] : d.terms_) c = s * c;
  return d;
}

Poly PolyDiffOp::apply(const std::vector<Poly>& args) const {
  require(static_cast<int>(args.size()) == arity_, "argument count mismatch");
  for (auto& a : args) require(a.dim() == dim_, "argument dimension mismatch");
  Poly out(dim_);
  for (auto& [key, coeff] : terms_) {
    Poly prod = coeff;
    for (int s = 0; s < arity_ && !prod.is_zero(); ++s) prod = prod * args[s].derivative(key[s]);
    out += prod;
  }
  return out;
}

PolyDiffOp PolyDiffOp::insert(int slot, const PolyDiffOp& inner) const {
  require(slot >= 0 && slot < arity_, "insertion slot out of range");
  require(dim_ == inner.dim_, "operator dimension mismatch");
  int ra = arity_ + inner.arity_ - 1;
  PolyDiffOp r(ra, dim_);
  Key key(ra);
  for (auto& [mA, cA] : terms_) {
    for (auto& [mB, cB] : inner.terms_) {
      // Leibniz: d^{m_slot} hits inner's coefficient and each inner slot
      for_each_split(mA[slot], inner.arity_ + 1, [&](const std::vector<Expo>& parts,
                                                     const Scalar& w) {
        Poly dcB = cB.derivative(parts[0]);
        if (dcB.is_zero()) return;
        int at = 0;
        for (int i = 0; i < slot; ++i) key[at++] = mA[i];
        for (int t = 0; t < inner.arity_; ++t) {
          Expo e = mB[t];
          for (int v = 0; v < dim_; ++v) e[v] += parts[t + 1][v];
          key[at++] = std::move(e);
        }
        for (int i = slot + 1; i < arity_; ++i) key[at++] = mA[i];
        Poly coeff(dim_);
        Poly::acc_mul(coeff, w, cA, dcB);
        r.add_term(key, coeff);
      });
    }
  }
  return r;
}

PolyDiffOp PolyDiffOp::permute_args(const std::vector<int>& perm) const {
  require(static_cast<int>(perm.size()) == arity_, "permutation size mismatch");
  std::vector<char> seen(arity_, 0);
  for (int v : perm) {
    require(v >= 0 && v < arity_ && !seen[v], "not a permutation of the argument slots");
    seen[v] = 1;
  }
  PolyDiffOp r(arity_, dim_);
  Key key(arity_);
  for (auto& [k, c] : terms_) {
    // this(f_{perm[0]},...) places slot i's derivatives on argument perm[i]
    for (int i = 0; i < arity_; ++i) key[perm[i]] = k[i];
    r.add_term(key, c);
  }
  return r;
}

bool PolyDiffOp::is_antisymmetric() const {
  for (int i = 0; i + 1 < arity_; ++i) {
    std::vector<int> tau(arity_);
    std::iota(tau.begin(), tau.end(), 0);
    std::swap(tau[i], tau[i + 1]);
    if (permute_args(tau) != -*this) return false;
  }
  return true;
}

std::string PolyDiffOp::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto& [k, c] : terms_) {
    std::string t = "(" + c.str(names) + ")*d[";
    for (int s = 0; s < arity_; ++s) {
      if (s) t += "|";
      for (int v = 0; v < dim_; ++v) {
        if (v) t += ",";
        t += std::to_string(k[s][v]);
      }
    }
    t += "]";
    if (!out.empty()) out += " + ";
    out += t;
  }
  return out;
}

PolyDiffOp gerstenhaber_compose(const PolyDiffOp& a, const PolyDiffOp& b) {
  int ka = a.arity() - 1, kb = b.arity() - 1;
  PolyDiffOp r(a.arity() + b.arity() - 1, a.dim());
  for (int j = 0; j <= ka; ++j) {
    PolyDiffOp ins = a.insert(j, b);
    r += ((j * kb) % 2 == 0) ? ins : -ins;
  }
  return r;
}

PolyDiffOp gerstenhaber_bracket(const PolyDiffOp& a, const PolyDiffOp& b) {
  int ka = a.arity() - 1, kb = b.arity() - 1;
  PolyDiffOp r = gerstenhaber_compose(a, b);
  PolyDiffOp s = gerstenhaber_compose(b, a);
  return ((ka * kb) % 2 == 0) ? r - s : r + s;
}

PolyDiffOp hochschild_coboundary(const PolyDiffOp& c) {
  int p = c.arity();
  PolyDiffOp m = PolyDiffOp::multiplication(c.dim());
  PolyDiffOp r = m.insert(1, c);  // u_0 * C(u_1..u_p)
  for (int i = 1; i <= p; ++i) {
    PolyDiffOp ins = c.insert(i - 1, m);  // C(..., u_{i-1} u_i, ...)
    r += (i % 2 == 0) ? ins : -ins;
  }
  PolyDiffOp last = m.insert(0, c);  // C(u_0..u_{p-1}) * u_p
  r += ((p + 1) % 2 == 0) ? last : -last;
  return r;
}

PolyVector::PolyVector(int degree, int dim) : degree_(degree), dim_(dim) {
  require(degree >= 0 && dim >= 1, "bad polyvector shape");
}

void PolyVector::add_component(std::vector<int> idx, const Poly& c) {
  require(static_cast<int>(idx.size()) == degree_, "component tuple length mismatch");
  require(c.dim() == dim_, "component dimension mismatch");
  if (c.is_zero()) return;
  int sign = 1;
  for (size_t a = 0; a < idx.size(); ++a) {
    require(idx[a] >= 0 && idx[a] < dim_, "component index out of range");
    for (size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return;  // wedge of repeated directions
      if (idx[a] > idx[b]) {
        std::swap(idx[a], idx[b]);
        sign = -sign;
      }
    }
  }
  Poly sc = (sign > 0) ? c : -c;
  auto [it, fresh] = comps_.try_emplace(idx, sc);
  if (!fresh) {
    it->second += sc;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

Poly PolyVector::component(std::vector<int> idx) const {
  require(static_cast<int>(idx.size()) == degree_, "component tuple length mismatch");
  int sign = 1;
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return Poly(dim_);
      if (idx[a] > idx[b]) {
        std::swap(idx[a], idx[b]);
        sign = -sign;
      }
    }
  auto it = comps_.find(idx);
  if (it == comps_.end()) return Poly(dim_);
  return (sign > 0) ? it->second : -it->second;
}

PolyVector& PolyVector::operator+=(const PolyVector& o) {
  require(degree_ == o.degree_ && dim_ == o.dim_, "polyvector shape mismatch");
  for (auto& [k, c] : o.comps_) add_component(k, c);
  return *this;
}

PolyVector operator*(const Scalar& s, PolyVector v) {
  if (s.is_zero()) return PolyVector(v.degree_, v.dim_);
  for (auto& [k, c] : v.comps_) c = s * c;
  return v;
}

PolyVector schouten_bracket(const PolyVector& A, const PolyVector& B) {
  require(A.dim() == B.dim(), "polyvector dimension mismatch");
  int k = A.degree(), l = B.degree();
  require(k >= 1 && l >= 1, "schouten bracket needs degree >= 1 factors");
  int dim = A.dim();
  PolyVector r(k + l - 1, dim);

  // Components are coordinate decomposables (f dI0)^dI1^.. so the bracket of
  // wedges of vector fields applies term by term; only the coefficient-
  // carrying factor has a nonzero bracket with anything.
  for (auto& [I, f] : A.components()) {
    for (auto& [J, g] : B.components()) {
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < l; ++b) {
          int sgn = ((a + b) % 2 == 0) ? 1 : -1;
          // [xi_a, eta_b] as a list of (coefficient, direction) pairs
          std::vector<std::pair<Poly, int>> lie;
          if (a == 0 && b == 0) {
            lie.push_back({f * g.derivative(I[0]), J[0]});
            lie.push_back({-(g * f.derivative(J[0])), I[0]});
          } else if (a == 0 && b > 0) {
            lie.push_back({-f.derivative(J[b]), I[0]});
          } else if (a > 0 && b == 0) {
            lie.push_back({g.derivative(I[a]), J[0]});
          }  // constant directions commute
          if (lie.empty()) continue;
          Poly extra = Poly::constant(dim, Scalar(1));
          if (a > 0) extra = extra * f;
          if (b > 0) extra = extra * g;
          std::vector<int> tuple;
          tuple.reserve(k + l - 1);
          tuple.push_back(0);  // placeholder for the bracket direction
          for (int t = 0; t < k; ++t)
            if (t != a) tuple.push_back(I[t]);
          for (int t = 0; t < l; ++t)
            if (t != b) tuple.push_back(J[t]);
          for (auto& [h, dir] : lie) {
            if (h.is_zero()) continue;
            tuple[0] = dir;
            Poly coeff = h * extra;
            r.add_component(tuple, (sgn > 0) ? coeff : -coeff);
          }
        }
      }
    }
  }
  return r;
}

PolyDiffOp hkr_inject(const PolyVector& xi) {
  int k = xi.degree();
  require(k >= 1, "injection needs degree >= 1");
  int dim = xi.dim();
  PolyDiffOp r(k, dim);
  Scalar inv_fact = Scalar(1) / factorial(k);
  std::vector<int> perm(k);
  for (auto& [I, f] : xi.components()) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      PolyDiffOp::Key key(k, Expo(dim, 0));
      for (int b = 0; b < k; ++b) key[b][I[perm[b]]] = 1;
      Scalar w = Scalar(perm_sign(perm)) * inv_fact;
      r.add_term(key, w * f);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return r;
}

PoissonStructure::PoissonStructure(int dim, std::vector<std::vector<Poly>> mat)
    : dim_(dim), mat_(std::move(mat)) {
  require(static_cast<int>(mat_.size()) == dim, "matrix size mismatch");
  for (int i = 0; i < dim; ++i) {
    require(static_cast<int>(mat_[i].size()) == dim, "matrix row size mismatch");
    for (int j = 0; j < dim; ++j) {
      require(mat_[i][j].dim() == dim, "matrix entry dimension mismatch");
      require(mat_[i][j] == -mat_[j][i], "bivector matrix must be antisymmetric");
    }
  }
}

PoissonStructure PoissonStructure::standard(int dof) {
  require(dof >= 1, "need at least one degree of freedom");
  int dim = 2 * dof;
  std::vector<std::vector<Poly>> m(dim, std::vector<Poly>(dim, Poly(dim)));
  for (int a = 0; a < dof; ++a) {
    m[a][dof + a] = Poly::constant(dim, Scalar(1));   // {q_a, p_a} = 1
    m[dof + a][a] = Poly::constant(dim, Scalar(-1));
  }
  return PoissonStructure(dim, std::move(m));
}

PoissonStructure PoissonStructure::so3() {
  std::vector<std::vector<Poly>> m(3, std::vector<Poly>(3, Poly(3)));
  Poly x1 = Poly::variable(3, 0), x2 = Poly::variable(3, 1), x3 = Poly::variable(3, 2);
  m[0][1] = x3;
  m[1][0] = -x3;
  m[0][2] = -x2;
  m[2][0] = x2;
  m[1][2] = x1;
  m[2][1] = -x1;
  return PoissonStructure(3, std::move(m));
}

Poly PoissonStructure::bracket(const Poly& u, const Poly& v) const {
  require(u.dim() == dim_ && v.dim() == dim_, "argument dimension mismatch");
  Poly out(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (u.derivative(i).is_zero()) continue;
    for (int j = 0; j < dim_; ++j) {
      if (mat_[i][j].is_zero()) continue;
      Poly::acc_mul(out, Scalar(1), mat_[i][j] * u.derivative(i), v.derivative(j));
    }
  }
  return out;
}

PolyDiffOp PoissonStructure::as_operator() const {
  PolyDiffOp r(2, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (mat_[i][j].is_zero()) continue;
      PolyDiffOp::Key key{Expo(dim_, 0), Expo(dim_, 0)};
      key[0][i] = 1;
      key[1][j] = 1;
      r.add_term(key, mat_[i][j]);
    }
  return r;
}

PolyVector PoissonStructure::as_bivector() const {
  PolyVector v(2, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) v.add_component({i, j}, mat_[i][j]);
  return v;
}

PolyVector PoissonStructure::jacobi_defect() const {
  PolyVector b = as_bivector();
  return schouten_bracket(b, b);
}

PolyDiffOp chevalley_coboundary(const PolyDiffOp& b, const PoissonStructure& p) {
  require(b.dim() == p.dim(), "cochain/bracket dimension mismatch");
  require(b.is_antisymmetric(), "cochain must be antisymmetric");
  require(p.is_poisson(), "bracket fails the Jacobi identity");
  int ar = b.arity();
  PolyDiffOp pop = p.as_operator();
  PolyDiffOp r(ar + 1, b.dim());

  // sum_j (-1)^j {u_j, B(.. without j ..)}
  PolyDiffOp hang = pop.insert(1, b);  // (f_0,..) -> {f_0, B(f_1..)}
  for (int j = 0; j <= ar; ++j) {
    std::vector<int> perm(ar + 1);
    perm[0] = j;
    for (int t = 1, val = 0; t <= ar; ++t, ++val) {
      if (val == j) ++val;
      perm[t] = val;
    }
    PolyDiffOp e = hang.permute_args(perm);
    r += (j % 2 == 0) ? e : -e;
  }

  // sum_{i<j} (-1)^{i+j} B({u_i,u_j}, .. without i,j ..)
  PolyDiffOp plug = b.insert(0, pop);  // (f_0,f_1,..) -> B({f_0,f_1}, f_2..)
  for (int i = 0; i <= ar; ++i) {
    for (int j = i + 1; j <= ar; ++j) {
      std::vector<int> perm(ar + 1);
      perm[0] = i;
      perm[1] = j;
      for (int t = 2, val = 0; t <= ar; ++t, ++val) {
        while (val == i || val == j) ++val;
        perm[t] = val;
      }
      PolyDiffOp e = plug.permute_args(perm);
      r += ((i + j) % 2 == 0) ? e : -e;
    }
  }
  return r;
}

PolyDiffOp adjoint_normal_form(const PolyDiffOp& a) {
  require(a.arity() == 2, "normal form defined for binary operators");
  int dim = a.dim();
  PolyDiffOp r(2, dim);
  for (auto& [key, c] : a.terms()) {
    const Expo& m = key[0];
    int total = std::accumulate(m.begin(), m.end(), 0);
    // integrate by parts: int c d^m(u) d^n(v) = int u (-1)^{|m|} d^m(c d^n v)
    for_each_split(m, 2, [&](const std::vector<Expo>& parts, const Scalar& w) {
      Poly dc = c.derivative(parts[0]);
      if (dc.is_zero()) return;
      Expo n = key[1];
      for (int v = 0; v < dim; ++v) n[v] += parts[1][v];
      Scalar sgn = (total % 2 == 0) ? w : -w;
      r.add_term({Expo(dim, 0), n}, sgn * dc);
    });
  }
  return r;
}

}  // namespace dq
