#include "dq/fedosov.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "dq/error.hpp"

namespace dq {

namespace {

Poly det_poly(const std::vector<std::vector<Poly>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  const int dim = m[0][0].dim();
  Poly acc(dim);
  for (int c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Poly>> sub;
    sub.reserve(n - 1);
    for (int i = 1; i < n; ++i) {
      std::vector<Poly> row;
      row.reserve(n - 1);
      for (int j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      sub.push_back(std::move(row));
    }
    Poly cof = m[0][c] * det_poly(sub);
    if (c % 2) acc -= cof; else acc += cof;
  }
  return acc;
}

std::vector<std::vector<Poly>> drop_row_col(const std::vector<std::vector<Poly>>& m,
                                            int row, int col) {
  std::vector<std::vector<Poly>> sub;
  const int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i) {
    if (i == row) continue;
    std::vector<Poly> r;
    for (int j = 0; j < n; ++j)
      if (j != col) r.push_back(m[i][j]);
    sub.push_back(std::move(r));
  }
  return sub;
}

int abs_expo(const Expo& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

// sign of inserting dx^j into the ascending wedge (dx)^beta
int insert_sign(unsigned beta, int j) {
  const unsigned below = beta & ((1u << j) - 1u);
  return (std::popcount(below) % 2) ? -1 : 1;
}

// sign of the interior product picking dx^j out of (dx)^beta
int pick_sign(unsigned beta, int j) {
  const unsigned below = beta & ((1u << j) - 1u);
  return (std::popcount(below) % 2) ? -1 : 1;
}

// sign of concatenating two ascending wedges (disjoint masks)
int wedge_sign(unsigned b1, unsigned b2) {
  int inversions = 0;
  for (int i = 0; i < 32; ++i) {
    if (!(b1 >> i & 1u)) continue;
    inversions += std::popcount(b2 & ((1u << i) - 1u));
  }
  return (inversions % 2) ? -1 : 1;
}

// delta written as a fiberwise bracket: (1/2L)[s_delta, a] = delta(a)
WeylSection s_delta(const SymplecticData& sd, int dmax) {
  WeylSection s(sd.dim(), dmax);
  for (int u = 0; u < sd.dim(); ++u)
    for (int v = 0; v < sd.dim(); ++v) {
      if (sd.omega(u, v).is_zero()) continue;
      Expo a(sd.dim(), 0);
      a[u] = 1;
      s.add_term(0, a, 1u << v, sd.omega(u, v));
    }
  return s;
}

// shared pair loop of fiber_compose / graded_bracket; when graded_swap is
// set the pair (ta, tb) is accumulated as -(-1)^{pq} tb o ta
void accumulate_compose(WeylSection& out, const SymplecticData& sd,
                        const WeylSection& a, const WeylSection& b,
                        bool graded_swap) {
  const int dim = sd.dim();
  struct Entry {
    Expo a1, a2;
    Poly c;
  };
  for (const auto& [k1, c1] : (graded_swap ? b : a).terms())
    for (const auto& [k2, c2] : (graded_swap ? a : b).terms()) {
      if (k1.beta & k2.beta) continue;
      const int deg = 2 * (k1.k + k2.k) + abs_expo(k1.alpha) + abs_expo(k2.alpha);
      if (deg > out.dmax()) continue;
      int sign = wedge_sign(k1.beta, k2.beta);
      if (graded_swap) {
        const int pq = std::popcount(k1.beta) * std::popcount(k2.beta);
        sign *= (pq % 2) ? 1 : -1;
      }
      const unsigned beta = k1.beta | k2.beta;
      std::vector<Entry> cur{{k1.alpha, k2.alpha, Scalar(sign) * (c1 * c2)}};
      for (int r = 0; !cur.empty(); ++r) {
        const Scalar inv_fact = Scalar(1) / factorial(r);
        for (const auto& e : cur) {
          Expo alpha(dim);
          for (int t = 0; t < dim; ++t) alpha[t] = e.a1[t] + e.a2[t];
          out.add_term(k1.k + k2.k + r, alpha, beta, inv_fact * e.c);
        }
        std::vector<Entry> next;
        for (const auto& e : cur)
          for (int u = 0; u < dim; ++u) {
            if (e.a1[u] == 0) continue;
            for (int v = 0; v < dim; ++v) {
              if (e.a2[v] == 0) continue;
              const Poly& luv = sd.poisson(u, v);
              if (luv.is_zero()) continue;
              Entry n{e.a1, e.a2, Scalar(long(e.a1[u]) * e.a2[v]) * (luv * e.c)};
              --n.a1[u];
              --n.a2[v];
              next.push_back(std::move(n));
            }
          }
        cur = std::move(next);
      }
    }
}

}  // namespace

SymplecticData::SymplecticData(int dim, std::vector<std::vector<Poly>> omega,
                               std::vector<std::vector<std::vector<Poly>>> gamma)
    : dim_(dim), omega_(std::move(omega)), gamma_(std::move(gamma)) {
  require(dim_ >= 2 && dim_ % 2 == 0, "chart dimension must be even and positive");
  require(static_cast<int>(omega_.size()) == dim_, "omega must be dim x dim");
  for (const auto& row : omega_) {
    require(static_cast<int>(row.size()) == dim_, "omega must be dim x dim");
    for (const Poly& e : row)
      require(e.dim() == dim_, "omega entries must live on the chart");
  }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j <= i; ++j)
      require(omega_[i][j] == -omega_[j][i], "omega must be antisymmetric");
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k)
        require((omega_[j][k].derivative(i) + omega_[k][i].derivative(j) +
                 omega_[i][j].derivative(k))
                    .is_zero(),
                "omega must be closed");

  Poly det = det_poly(omega_);
  require(!det.is_zero() && det.total_degree() == 0,
          "omega must be invertible with constant determinant on the chart");
  const Scalar inv_det = Scalar(1) / det.constant_term();
  poisson_.assign(dim_, std::vector<Poly>(dim_, Poly(dim_)));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Poly cof = det_poly(drop_row_col(omega_, j, i));
      const Scalar s = ((i + j) % 2) ? -inv_det : inv_det;
      poisson_[i][j] = (-s) * cof;  // -omega^{-1}
    }
  for (int w = 0; w < dim_; ++w)
    for (int v = 0; v < dim_; ++v) {
      Poly acc(dim_);
      for (int u = 0; u < dim_; ++u) acc += poisson_[u][w] * omega_[u][v];
      Poly expect = Poly::constant(dim_, Scalar(w == v ? 1 : 0));
      require(acc == expect, "fiber Poisson matrix certification failed",
              errc::check_failed);
    }

  if (gamma_.empty())
    gamma_.assign(dim_, std::vector<std::vector<Poly>>(
                            dim_, std::vector<Poly>(dim_, Poly(dim_))));
  require(static_cast<int>(gamma_.size()) == dim_,
          "christoffel symbols must be dim x dim x dim");
  for (const auto& plane : gamma_) {
    require(static_cast<int>(plane.size()) == dim_,
            "christoffel symbols must be dim x dim x dim");
    for (const auto& row : plane) {
      require(static_cast<int>(row.size()) == dim_,
              "christoffel symbols must be dim x dim x dim");
      for (const Poly& e : row)
        require(e.dim() == dim_, "christoffel entries must live on the chart");
    }
  }
  for (int l = 0; l < dim_; ++l)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < i; ++j)
        require(gamma_[l][i][j] == gamma_[l][j][i],
                "connection must be torsionless");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        Poly nabla = omega_[j][k].derivative(i);
        for (int l = 0; l < dim_; ++l) {
          nabla -= gamma_[l][i][j] * omega_[l][k];
          nabla -= gamma_[l][i][k] * omega_[j][l];
        }
        require(nabla.is_zero(), "connection must preserve omega");
      }
}

SymplecticData SymplecticData::standard(int dof) {
  require(dof >= 1, "need at least one degree of freedom");
  const int dim = 2 * dof;
  std::vector<std::vector<Poly>> om(dim, std::vector<Poly>(dim, Poly(dim)));
  for (int a = 0; a < dof; ++a) {
    om[a][dof + a] = Poly::constant(dim, Scalar(1));
    om[dof + a][a] = Poly::constant(dim, Scalar(-1));
  }
  return SymplecticData(dim, std::move(om));
}

bool SymplecticData::flat_connection() const {
  for (const auto& plane : gamma_)
    for (const auto& row : plane)
      for (const Poly& e : row)
        if (!e.is_zero()) return false;
  return true;
}

WeylSection::WeylSection(int dim, int dmax) : dim_(dim), dmax_(dmax) {
  require(dim >= 1, "section dimension must be positive");
  require(dmax >= 0, "degree cap must be nonnegative");
}

WeylSection WeylSection::scalar(const Poly& f, int dmax) {
  WeylSection s(f.dim(), dmax);
  s.add_term(0, Expo(f.dim(), 0), 0u, f);
  return s;
}

WeylSection WeylSection::unit(int dim, int dmax) {
  return scalar(Poly::constant(dim, Scalar(1)), dmax);
}

void WeylSection::add_term(int k, const Expo& alpha, unsigned beta, const Poly& c) {
  if (c.is_zero()) return;
  require(k >= 0, "negative L powers cannot be stored");
  require(static_cast<int>(alpha.size()) == dim_ && c.dim() == dim_,
          "term shape must match the section dimension");
  require(beta < (1u << dim_), "form indices out of range");
  if (2 * k + abs_expo(alpha) > dmax_) return;
  Key key{k, alpha, beta};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WeylSection WeylSection::truncate(int maxdeg) const {
  WeylSection out(dim_, dmax_);
  for (const auto& [key, c] : terms_)
    if (2 * key.k + abs_expo(key.alpha) <= maxdeg) out.terms_.emplace(key, c);
  return out;
}

int WeylSection::min_degree() const {
  if (terms_.empty()) return -1;
  int best = -1;
  for (const auto& [key, c] : terms_) {
    const int d = 2 * key.k + abs_expo(key.alpha);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

WeylSection WeylSection::operator-() const {
  WeylSection out(dim_, dmax_);
  for (const auto& [key, c] : terms_) out.terms_.emplace(key, -c);
  return out;
}

WeylSection& WeylSection::operator+=(const WeylSection& o) {
  require(dim_ == o.dim_, "section dimensions must agree");
  for (const auto& [key, c] : o.terms_) add_term(key.k, key.alpha, key.beta, c);
  return *this;
}

WeylSection& WeylSection::operator-=(const WeylSection& o) {
  require(dim_ == o.dim_, "section dimensions must agree");
  for (const auto& [key, c] : o.terms_) add_term(key.k, key.alpha, key.beta, -c);
  return *this;
}

WeylSection operator*(const Scalar& s, WeylSection a) {
  WeylSection out(a.dim_, a.dmax_);
  if (s == Scalar(0)) return out;
  for (auto& [key, c] : a.terms_) out.terms_.emplace(key, s * c);
  return out;
}

std::string WeylSection::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str(names) << ")";
    if (key.k > 0) os << "*L^" << key.k;
    for (int j = 0; j < dim_; ++j)
      for (int t = 0; t < key.alpha[j]; ++t) os << "*y" << j + 1;
    for (int j = 0; j < dim_; ++j)
      if (key.beta >> j & 1u) os << "*dx" << j + 1;
  }
  return os.str();
}

WeylSection fiber_compose(const SymplecticData& sd, const WeylSection& a,
                          const WeylSection& b) {
  require(sd.dim() == a.dim() && a.dim() == b.dim(),
          "chart and section dimensions must agree");
  WeylSection out(a.dim(), std::min(a.dmax(), b.dmax()));
  accumulate_compose(out, sd, a, b, false);
  return out;
}

WeylSection graded_bracket(const SymplecticData& sd, const WeylSection& a,
                           const WeylSection& b) {
  require(sd.dim() == a.dim() && a.dim() == b.dim(),
          "chart and section dimensions must agree");
  WeylSection out(a.dim(), std::min(a.dmax(), b.dmax()));
  accumulate_compose(out, sd, a, b, false);
  accumulate_compose(out, sd, a, b, true);
  return out;
}

WeylSection delta_op(const WeylSection& a) {
  WeylSection out(a.dim(), a.dmax());
  for (const auto& [key, c] : a.terms())
    for (int j = 0; j < a.dim(); ++j) {
      if (key.alpha[j] == 0 || (key.beta >> j & 1u)) continue;
      Expo na = key.alpha;
      --na[j];
      out.add_term(key.k, na, key.beta | (1u << j),
                   Scalar(long(key.alpha[j]) * insert_sign(key.beta, j)) * c);
    }
  return out;
}

WeylSection delta_star(const WeylSection& a) {
  WeylSection out(a.dim(), a.dmax());
  for (const auto& [key, c] : a.terms())
    for (int j = 0; j < a.dim(); ++j) {
      if (!(key.beta >> j & 1u)) continue;
      Expo na = key.alpha;
      ++na[j];
      out.add_term(key.k, na, key.beta & ~(1u << j),
                   Scalar(pick_sign(key.beta, j)) * c);
    }
  return out;
}

WeylSection delta_inv(const WeylSection& a) {
  WeylSection out(a.dim(), a.dmax());
  for (const auto& [key, c] : a.terms()) {
    const int pq = abs_expo(key.alpha) + std::popcount(key.beta);
    if (pq == 0) continue;
    for (int j = 0; j < a.dim(); ++j) {
      if (!(key.beta >> j & 1u)) continue;
      Expo na = key.alpha;
      ++na[j];
      out.add_term(key.k, na, key.beta & ~(1u << j),
                   Scalar::ratio(pick_sign(key.beta, j), pq) * c);
    }
  }
  return out;
}

HodgeParts hodge_decompose(const WeylSection& a) {
  HodgeParts parts{delta_op(delta_inv(a)), delta_inv(delta_op(a)),
                   WeylSection(a.dim(), a.dmax())};
  for (const auto& [key, c] : a.terms())
    if (key.beta == 0u && abs_expo(key.alpha) == 0)
      parts.center.add_term(key.k, key.alpha, key.beta, c);
  return parts;
}

WeylSection nabla_hat(const SymplecticData& sd, const WeylSection& a) {
  require(sd.dim() == a.dim(), "chart and section dimensions must agree");
  const int dim = a.dim();
  WeylSection out(dim, a.dmax());
  for (const auto& [key, c] : a.terms())
    for (int i = 0; i < dim; ++i) {
      if (key.beta >> i & 1u) continue;
      const int sg = insert_sign(key.beta, i);
      const unsigned nb = key.beta | (1u << i);
      out.add_term(key.k, key.alpha, nb, Scalar(sg) * c.derivative(i));
      for (int l = 0; l < dim; ++l) {
        if (key.alpha[l] == 0) continue;
        for (int k2 = 0; k2 < dim; ++k2) {
          const Poly& g = sd.christoffel(l, i, k2);
          if (g.is_zero()) continue;
          Expo na = key.alpha;
          --na[l];
          ++na[k2];
          out.add_term(key.k, na, nb, Scalar(-long(key.alpha[l]) * sg) * (g * c));
        }
      }
    }
  return out;
}

WeylSection curvature_section(const SymplecticData& sd, int dmax) {
  const int dim = sd.dim();
  WeylSection out(dim, dmax);
  const Scalar quarter = Scalar::ratio(1, 4);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        for (int m = 0; m < dim; ++m) {
          Poly rm = sd.christoffel(m, j, k).derivative(i) -
                    sd.christoffel(m, i, k).derivative(j);
          for (int n = 0; n < dim; ++n) {
            rm += sd.christoffel(m, i, n) * sd.christoffel(n, j, k);
            rm -= sd.christoffel(m, j, n) * sd.christoffel(n, i, k);
          }
          if (rm.is_zero()) continue;
          for (int l = 0; l < dim; ++l) {
            if (sd.omega(l, m).is_zero()) continue;
            Expo alpha(dim, 0);
            ++alpha[l];
            ++alpha[k];
            // both (i,j) and (j,i) orientations of the full sum land on the
            // ascending wedge, doubling the i < j contribution
            out.add_term(0, alpha, (1u << i) | (1u << j),
                         (Scalar(2) * quarter) * (sd.omega(l, m) * rm));
          }
        }
      }
  return out;
}

WeylSection div_2lambda(const WeylSection& a) {
  WeylSection out(a.dim(), a.dmax());
  const Scalar half = Scalar::ratio(1, 2);
  for (const auto& [key, c] : a.terms()) {
    require(key.k >= 1, "every term must carry a positive L power");
    out.add_term(key.k - 1, key.alpha, key.beta, half * c);
  }
  return out;
}

LambdaSeries symbol(const WeylSection& a, int order) {
  require(order >= 0, "series order must be nonnegative");
  LambdaSeries out(a.dim(), order);
  for (const auto& [key, c] : a.terms())
    if (key.beta == 0u && abs_expo(key.alpha) == 0 && key.k <= order)
      out.add_coeff(key.k, c);
  return out;
}

FedosovConnection solve_r(const SymplecticData& sd, int dmax) {
  require(dmax >= 0, "degree cap must be nonnegative");
  const int cap = dmax + 2;
  const WeylSection rt = curvature_section(sd, cap);
  WeylSection r(sd.dim(), cap);
  bool converged = false;
  for (int pass = 0; pass <= cap + 3; ++pass) {
    WeylSection rhs = rt + nabla_hat(sd, r) -
                      div_2lambda(fiber_compose(sd, r, r));
    WeylSection rn = delta_inv(rhs);
    if (rn == r) {
      converged = true;
      break;
    }
    r = std::move(rn);
  }
  require(converged, "connection recursion did not stabilize", errc::check_failed);
  require(delta_inv(r).is_zero(), "normalization delta_inv(r) = 0 failed",
          errc::check_failed);
  WeylSection residual = delta_op(r) - rt - nabla_hat(sd, r) +
                         div_2lambda(fiber_compose(sd, r, r));
  require(residual.truncate(dmax).is_zero(), "flatness recursion residual nonzero",
          errc::check_failed);

  FedosovConnection fc(sd, std::move(r), dmax);
  WeylSection minus_omega(sd.dim(), cap);
  for (int i = 0; i < sd.dim(); ++i)
    for (int j = i + 1; j < sd.dim(); ++j)
      minus_omega.add_term(0, Expo(sd.dim(), 0), (1u << i) | (1u << j),
                           -sd.omega(i, j));
  require(weyl_curvature(fc).truncate(dmax) == minus_omega,
          "Weyl curvature is not -omega", errc::check_failed);
  return fc;
}

WeylSection fedosov_derivative(const FedosovConnection& fc, const WeylSection& a) {
  const SymplecticData& sd = fc.data();
  return -delta_op(a) + nabla_hat(sd, a) -
         div_2lambda(graded_bracket(sd, fc.r(), a));
}

WeylSection weyl_curvature(const FedosovConnection& fc) {
  const SymplecticData& sd = fc.data();
  const int cap = fc.r().dmax();
  WeylSection gamma = s_delta(sd, cap) + fc.r();
  return curvature_section(sd, cap) + nabla_hat(sd, gamma) -
         div_2lambda(fiber_compose(sd, gamma, gamma));
}

WeylSection horizontal_lift(const Poly& f, const FedosovConnection& fc) {
  const SymplecticData& sd = fc.data();
  require(f.dim() == sd.dim(), "argument must live on the chart");
  const int cap = fc.r().dmax();
  const WeylSection base = WeylSection::scalar(f, cap);
  WeylSection a = base;
  bool converged = false;
  for (int pass = 0; pass <= cap + 3; ++pass) {
    WeylSection an = base + delta_inv(nabla_hat(sd, a) -
                                      div_2lambda(graded_bracket(sd, fc.r(), a)));
    if (an == a) {
      converged = true;
      break;
    }
    a = std::move(an);
  }
  require(converged, "lift recursion did not stabilize", errc::check_failed);
  require(fedosov_derivative(fc, a).truncate(fc.dmax()).is_zero(),
          "lift is not flat through the degree cap", errc::check_failed);
  return a;
}

LambdaSeries fedosov_star(const Poly& f, const Poly& g, const FedosovConnection& fc,
                          int dmax) {
  const SymplecticData& sd = fc.data();
  require(f.dim() == sd.dim() && g.dim() == sd.dim(),
          "arguments must live on the chart");
  require(dmax >= 0, "degree cap must be nonnegative");
  if (dmax > fc.dmax()) {
    std::ostringstream os;
    os << "product at degree cap " << dmax << " needs a connection solved to D_max >= "
       << dmax << " (have " << fc.dmax() << ")";
    throw error(errc::resource_bound, os.str());
  }
  WeylSection af = horizontal_lift(f, fc);
  WeylSection ag = horizontal_lift(g, fc);
  return symbol(fiber_compose(sd, af, ag), dmax / 2);
}

namespace {

void all_multis(int dim, int maxdeg, Expo& cur, int pos, std::vector<Expo>& out) {
  if (pos == dim) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int i = 0; i < pos; ++i) used += cur[i];
  for (int v = 0; v + used <= maxdeg; ++v) {
    cur[pos] = v;
    all_multis(dim, maxdeg, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

Scalar falling_product(const Expo& mu, const Expo& a) {
  Scalar s(1);
  for (size_t t = 0; t < mu.size(); ++t)
    s *= factorial(mu[t]) / factorial(mu[t] - a[t]);
  return s;
}

bool leq_expo(const Expo& a, const Expo& b) {
  for (size_t t = 0; t < a.size(); ++t)
    if (a[t] > b[t]) return false;
  return true;
}

Scalar multi_factorial(const Expo& a) {
  Scalar s(1);
  for (int v : a) s *= factorial(v);
  return s;
}

}  // namespace

StarProduct fedosov_cochains(const FedosovConnection& fc, int order) {
  require(order >= 1, "cochain order must be positive");
  if (2 * order > fc.dmax()) {
    std::ostringstream os;
    os << "cochains through order " << order << " need a connection with D_max >= "
       << 2 * order << " (have " << fc.dmax() << ")";
    throw error(errc::resource_bound, os.str());
  }
  const SymplecticData& sd = fc.data();
  const int dim = sd.dim();

  std::vector<Expo> multis;
  Expo scratch(dim, 0);
  all_multis(dim, order, scratch, 0, multis);
  std::sort(multis.begin(), multis.end(), [](const Expo& a, const Expo& b) {
    const int da = abs_expo(a), db = abs_expo(b);
    if (da != db) return da < db;
    return a < b;
  });

  std::vector<WeylSection> lifts;
  lifts.reserve(multis.size());
  for (const Expo& e : multis)
    lifts.push_back(horizontal_lift(Poly::monomial(dim, e, Scalar(1)), fc));

  const size_t n = multis.size();
  std::vector<std::vector<LambdaSeries>> values(
      n, std::vector<LambdaSeries>(n, LambdaSeries(dim, order)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      values[i][j] = symbol(fiber_compose(sd, lifts[i], lifts[j]), order);

  StarProduct sp(dim, order);
  for (int r = 1; r <= order; ++r) {
    PolyDiffOp op(2, dim);
    std::map<PolyDiffOp::Key, Poly> solved;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        const Expo& mu = multis[i];
        const Expo& nu = multis[j];
        Poly val = values[i][j].coeff(r);
        for (const auto& [key, cab] : solved) {
          if (!leq_expo(key[0], mu) || !leq_expo(key[1], nu)) continue;
          Expo rest(dim);
          for (int t = 0; t < dim; ++t)
            rest[t] = mu[t] - key[0][t] + nu[t] - key[1][t];
          const Scalar s = falling_product(mu, key[0]) * falling_product(nu, key[1]);
          Poly::acc_mul(val, -s, cab, Poly::monomial(dim, rest, Scalar(1)));
        }
        if (val.is_zero()) continue;
        const Scalar lead = multi_factorial(mu) * multi_factorial(nu);
        Poly c = (Scalar(1) / lead) * val;
        solved.emplace(PolyDiffOp::Key{mu, nu}, c);
        op.add_term({mu, nu}, c);
      }
    sp.set_cochain(r, op);
  }

  // certify the reconstruction against fresh product values on polynomials
  // outside the monomial family
  Poly mix(dim);
  for (int t = 0; t < dim; ++t)
    mix += Scalar(t + 1) * Poly::variable(dim, t);
  Poly sum(dim);
  for (int t = 0; t < dim; ++t) sum += Poly::variable(dim, t);
  const Poly one = Poly::constant(dim, Scalar(1));
  std::vector<std::pair<Poly, Poly>> probes{
      {mix.pow(order), sum.pow(order + 1)},
      {(sum + one).pow(order + 1), mix.pow(order)},
  };
  for (const auto& [f, g] : probes) {
    LambdaSeries direct = fedosov_star(f, g, fc, 2 * order);
    LambdaSeries recon = sp.multiply(f, g);
    for (int r = 0; r <= order; ++r)
      require(direct.coeff(r) == recon.coeff(r),
              "cochain reconstruction disagrees with the product",
              errc::check_failed);
  }
  return sp;
}

}  // namespace dq
