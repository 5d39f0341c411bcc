#include "dq/moyal.hpp"

#include <functional>

#include "dq/error.hpp"

namespace dq {

namespace {

// all multi-indices over `slots` entries with total degree r
void for_each_total(int slots, int r, const std::function<void(const Expo&)>& fn) {
  Expo cur(slots, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == slots - 1) {
      cur[pos] = left;
      fn(cur);
      cur[pos] = 0;
      return;
    }
    for (int take = 0; take <= left; ++take) {
      cur[pos] = take;
      rec(pos + 1, left - take);
    }
    cur[pos] = 0;
  };
  if (slots == 0) {
    if (r == 0) fn(cur);
    return;
  }
  rec(0, r);
}

Scalar multi_factorial(const Expo& e) {
  Scalar f(1);
  for (int v : e) f = f * factorial(v);
  return f;
}

// expansion of prod_a ((d_q_a + s*i*d_p_a)/2)^{mu_a} into real derivatives
std::vector<std::pair<Expo, Scalar>> complex_deriv(int dof, const Expo& mu, int s) {
  std::vector<std::pair<Expo, Scalar>> out{{Expo(2 * dof, 0), Scalar(1)}};
  for (int a = 0; a < dof; ++a) {
    for (int step = 0; step < mu[a]; ++step) {
      std::vector<std::pair<Expo, Scalar>> next;
      Scalar half = Scalar::ratio(1, 2);
      Scalar ihalf = Scalar(s) * Scalar::i() * half;
      for (auto& [e, c] : out) {
        Expo eq = e;
        ++eq[a];
        next.push_back({std::move(eq), c * half});
        Expo ep = e;
        ++ep[dof + a];
        next.push_back({std::move(ep), c * ihalf});
      }
      // merge duplicates
      std::map<Expo, Scalar> m;
      for (auto& [e, c] : next) {
        auto [it, fresh] = m.try_emplace(e, c);
        if (!fresh) it->second = it->second + c;
      }
      out.assign(m.begin(), m.end());
    }
  }
  return out;
}

}  // namespace

FlatSymplectic::FlatSymplectic(int dof) : dof_(dof) {
  require(dof >= 1, "need at least one degree of freedom");
}

VarTable FlatSymplectic::vars() const { return pq_vars(dof_); }

PoissonStructure FlatSymplectic::poisson() const { return PoissonStructure::standard(dof_); }

Scalar FlatSymplectic::pairing(int i, int j) const {
  require(i >= 0 && i < dim() && j >= 0 && j < dim(), "variable index out of range");
  if (j == i + dof_) return Scalar(1);
  if (i == j + dof_) return Scalar(-1);
  return Scalar(0);
}

PolyDiffOp p_power_op(const FlatSymplectic& fs, int r) {
  require(r >= 0, "negative contraction order");
  int l = fs.dof(), dim = fs.dim();
  PolyDiffOp out(2, dim);
  Scalar rfact = factorial(r);
  for_each_total(2 * l, r, [&](const Expo& munu) {
    Expo mu(munu.begin(), munu.begin() + l);
    Expo nu(munu.begin() + l, munu.end());
    int anu = 0;
    for (int v : nu) anu += v;
    Scalar coeff = rfact / (multi_factorial(mu) * multi_factorial(nu));
    if (anu % 2) coeff = -coeff;
    Expo left(dim, 0), right(dim, 0);
    for (int a = 0; a < l; ++a) {
      left[a] = mu[a];
      left[l + a] = nu[a];
      right[a] = nu[a];
      right[l + a] = mu[a];
    }
    out.add_term({left, right}, Poly::constant(dim, coeff));
  });
  return out;
}

Poly p_power(const FlatSymplectic& fs, int r, const Poly& u, const Poly& v) {
  return p_power_op(fs, r).apply({u, v});
}

StarProduct moyal_star(const FlatSymplectic& fs, int order) {
  StarProduct s(fs.dim(), order);
  for (int r = 1; r <= order; ++r)
    s.set_cochain(r, (Scalar(1) / factorial(r)) * p_power_op(fs, r));
  return s;
}

LambdaSeries moyal_star(const FlatSymplectic& fs, const Poly& u, const Poly& v, int order) {
  return moyal_star(fs, order).multiply(u, v);
}

BracketDeformation moyal_bracket(const FlatSymplectic& fs, int order) {
  BracketDeformation b(fs.dim(), order);
  for (int r = 0; r <= order; ++r) {
    if (r % 2) continue;  // even powers of the bracket are symmetric
    b.set_cochain(r, (Scalar(1) / factorial(r + 1)) * p_power_op(fs, r + 1));
  }
  return b;
}

LambdaSeries moyal_bracket(const FlatSymplectic& fs, const Poly& u, const Poly& v,
                           int order) {
  return moyal_bracket(fs, order).bracket(u, v);
}

StarProduct ordered_star(Ordering kind, const FlatSymplectic& fs, int order) {
  if (kind == Ordering::weyl) return moyal_star(fs, order);
  int l = fs.dof(), dim = fs.dim();
  StarProduct s(dim, order);
  for (int r = 1; r <= order; ++r) {
    PolyDiffOp c(2, dim);
    for_each_total(l, r, [&](const Expo& mu) {
      Scalar base = Scalar(1) / multi_factorial(mu);
      if (kind == Ordering::standard) {
        base = base * Scalar(2).pow(r);
        Expo left(dim, 0), right(dim, 0);
        for (int a = 0; a < l; ++a) {
          left[a] = mu[a];
          right[l + a] = mu[a];
        }
        c.add_term({left, right}, Poly::constant(dim, base));
      } else {
        base = base * (Scalar(4) * Scalar::i()).pow(r);
        auto conj_side = complex_deriv(l, mu, +1);   // d/d abar on the left slot
        auto plain_side = complex_deriv(l, mu, -1);  // d/d a on the right slot
        for (auto& [el, cl] : conj_side)
          for (auto& [er, cr] : plain_side) c.add_term({el, er}, Poly::constant(dim, base * cl * cr));
      }
    });
    s.set_cochain(r, c);
  }
  return s;
}

LambdaSeries ordered_star(Ordering kind, const FlatSymplectic& fs, const Poly& u,
                          const Poly& v, int order) {
  return ordered_star(kind, fs, order).multiply(u, v);
}

std::vector<PolyDiffOp> ordering_equivalence(Ordering kind, const FlatSymplectic& fs,
                                             int order) {
  require(kind != Ordering::weyl, "the weyl product is the reference; nothing to transport");
  require(order >= 0, "negative order");
  int l = fs.dof(), dim = fs.dim();

  // exponent E of T = exp(L E): standard -sum d_q d_p, normal -2i sum d_a d_abar
  PolyDiffOp e(1, dim);
  for (int a = 0; a < l; ++a) {
    if (kind == Ordering::standard) {
      Expo d(dim, 0);
      d[a] = 1;
      d[l + a] = 1;
      e.add_term({d}, Poly::constant(dim, Scalar(-1)));
    } else {
      // -2i d_a d_abar = -(i/2)(d_q^2 + d_p^2)
      Scalar c = Scalar::i() * Scalar::ratio(-1, 2);
      Expo dq(dim, 0), dp(dim, 0);
      dq[a] = 2;
      dp[l + a] = 2;
      e.add_term({dq}, Poly::constant(dim, c));
      e.add_term({dp}, Poly::constant(dim, c));
    }
  }

  std::vector<PolyDiffOp> t;
  PolyDiffOp acc = PolyDiffOp::identity(dim);
  for (int r = 1; r <= order; ++r) {
    acc = (Scalar(1) / Scalar(r)) * acc.insert(0, e);
    t.push_back(acc);
  }
  return t;
}

}  // namespace dq
