#include "dq/star_exp.hpp"

#include <utility>

#include "dq/error.hpp"

namespace dq {

namespace {

// dense univariate series in t with Scalar coefficients, fixed length
using TSeries = std::vector<Scalar>;

TSeries ts_mul(const TSeries& a, const TSeries& b) {
  TSeries r(a.size(), Scalar(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; i + j < r.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// reciprocal of a series with unit constant term
TSeries ts_inv(const TSeries& a) {
  TSeries r(a.size(), Scalar(0));
  r[0] = Scalar(1);
  for (size_t m = 1; m < a.size(); ++m) {
    Scalar acc(0);
    for (size_t j = 1; j <= m; ++j) acc += a[j] * r[m - j];
    r[m] = -acc;
  }
  return r;
}

}  // namespace

QuadHamiltonian::QuadHamiltonian(const Scalar& a, const Scalar& b, const Scalar& g, int dof)
    : alpha(a), beta(b), gamma(g), dof(dof) {
  require(dof >= 1, "quadratic Hamiltonian needs at least one degree of freedom");
  require(a.is_real() && b.is_real() && g.is_real(),
          "quadratic Hamiltonian coefficients must be rational");
}

Scalar QuadHamiltonian::discriminant() const {
  return alpha * gamma - beta * beta * Scalar::ratio(1, 4);
}

bool QuadHamiltonian::is_isotropic() const { return beta.is_zero() && alpha == gamma; }

Poly QuadHamiltonian::polynomial() const {
  int dim = 2 * dof;
  Poly h(dim);
  for (int a = 0; a < dof; ++a) {
    Expo pp(dim, 0), pq(dim, 0), qq(dim, 0);
    pp[dof + a] = 2;
    pq[a] = 1;
    pq[dof + a] = 1;
    qq[a] = 2;
    h.add_term(pp, alpha);
    h.add_term(pq, beta);
    h.add_term(qq, gamma);
  }
  return h;
}

TimeSeries::TimeSeries(int dim, int order)
    : dim_(dim), order_(order), coeffs_(order + 1, LambdaSeries(dim, 0, Sym::hbar)) {
  require(order >= 0, "time series order must be nonnegative");
}

const LambdaSeries& TimeSeries::coeff(int n) const {
  require(n >= 0 && n <= order_, "time power out of range");
  return coeffs_[n];
}

void TimeSeries::set_coeff(int n, LambdaSeries s) {
  require(n >= 0 && n <= order_, "time power out of range");
  require(s.dim() == dim_, "time series coefficient dimension mismatch");
  require(s.sym() == Sym::hbar, "time series coefficients are hbar-form");
  coeffs_[n] = std::move(s);
}

bool operator==(const TimeSeries& a, const TimeSeries& b) {
  if (a.dim_ != b.dim_ || a.order_ != b.order_) return false;
  return a.coeffs_ == b.coeffs_;
}

std::string TimeSeries::str(const std::vector<std::string>& names) const {
  std::string out;
  for (int n = 0; n <= order_; ++n) {
    out += "t^" + std::to_string(n) + ": " + coeffs_[n].str(names);
    if (n != order_) out += "\n";
  }
  return out;
}

LambdaSeries star_power(const FlatSymplectic& fs, const Poly& h, int n, int order) {
  require(n >= 0, "star power exponent must be nonnegative");
  require(h.dim() == fs.dim(), "Hamiltonian dimension mismatch");
  StarProduct s = moyal_star(fs, order);
  LambdaSeries hs = LambdaSeries::from_poly(h, order);
  LambdaSeries acc = LambdaSeries::from_poly(Poly::constant(fs.dim(), Scalar(1)), order);
  for (int i = 0; i < n; ++i) acc = s.multiply(acc, hs);
  return acc;
}

TimeSeries star_exponential(const FlatSymplectic& fs, const Poly& h, int t_order,
                            int lambda_order) {
  require(t_order >= 0, "time order must be nonnegative");
  require(lambda_order >= t_order,
          "series order must cover the time order so every coefficient keeps a window");
  require(h.dim() == fs.dim(), "Hamiltonian dimension mismatch");
  StarProduct s = moyal_star(fs, lambda_order);
  LambdaSeries hs = LambdaSeries::from_poly(h, lambda_order);
  LambdaSeries acc = LambdaSeries::from_poly(Poly::constant(fs.dim(), Scalar(1)), lambda_order);
  TimeSeries out(fs.dim(), t_order);
  for (int n = 0; n <= t_order; ++n) {
    if (n > 0) acc = s.multiply(acc, hs);
    LambdaSeries c = acc.substitute_hbar().shift(-n);
    out.set_coeff(n, (Scalar::i().pow(-n) / factorial(n)) * c);
  }
  return out;
}

TimeSeries quadratic_closed_form(const QuadHamiltonian& hq, int t_order) {
  require(t_order >= 0, "time order must be nonnegative");
  int m = t_order;
  Scalar d = hq.discriminant();

  // tau' = 1 + d tau^2, tau(0) = 0
  TSeries tau(m + 1, Scalar(0));
  if (m >= 1) tau[1] = Scalar(1);
  for (int k = 1; k < m; ++k) {
    Scalar acc(0);
    for (int a = 0; a <= k; ++a) acc += tau[a] * tau[k - a];
    tau[k + 1] = d * acc / Scalar(k + 1);
  }

  // c(t) = sum_k (-d)^k t^{2k}/(2k)!, then c^{-dof}
  TSeries c(m + 1, Scalar(0));
  for (int k = 0; 2 * k <= m; ++k) c[2 * k] = (-d).pow(k) / factorial(2 * k);
  TSeries cinv = ts_inv(c);
  TSeries prefactor(m + 1, Scalar(0));
  prefactor[0] = Scalar(1);
  for (int i = 0; i < hq.dof; ++i) prefactor = ts_mul(prefactor, cinv);

  Poly h = hq.polynomial();
  int dim = h.dim();
  std::vector<Poly> hpow(m + 1, Poly(dim));
  hpow[0] = Poly::constant(dim, Scalar(1));
  for (int k = 1; k <= m; ++k) hpow[k] = hpow[k - 1] * h;

  // contribution of (H/(i hbar))^k: scalar t-series prefactor * tau^k / k!
  TimeSeries out(dim, m);
  TSeries taupow(m + 1, Scalar(0));
  taupow[0] = Scalar(1);
  std::vector<TSeries> weight(m + 1);
  weight[0] = prefactor;
  for (int k = 1; k <= m; ++k) {
    taupow = ts_mul(taupow, tau);
    weight[k] = ts_mul(prefactor, taupow);
  }
  for (int n = 0; n <= m; ++n) {
    LambdaSeries cn(dim, m - n, Sym::hbar);
    for (int k = 0; k <= n; ++k) {
      const Scalar& q = weight[k][n];
      if (q.is_zero()) continue;
      cn.set_coeff(-k, ((-Scalar::i()).pow(k) * q / factorial(k)) * hpow[k]);
    }
    out.set_coeff(n, std::move(cn));
  }
  return out;
}

int exp_matches_closed_form(const QuadHamiltonian& hq, int t_order) {
  FlatSymplectic fs(hq.dof);
  TimeSeries lhs = star_exponential(fs, hq.polynomial(), t_order, t_order);
  TimeSeries rhs = quadratic_closed_form(hq, t_order);
  for (int n = 0; n <= t_order; ++n)
    if (lhs.coeff(n) != rhs.coeff(n)) return n;
  return -1;
}

RadialFunction::RadialFunction(const Scalar& s, Poly g) : s(s), g(std::move(g)) {
  require(this->g.dim() == 1, "radial polynomial part lives in one variable");
  require(s.is_real(), "radial exponent rate must be rational");
}

std::string RadialFunction::str() const {
  if (g.is_zero()) return "0";
  std::string rate = s.is_simple() ? s.str() : "(" + s.str() + ")";
  return "(" + g.str({"u"}) + ") * exp(" + rate + "*u), u = H/h";
}

RadialFunction star_eigen_defect(const QuadHamiltonian& hq, const RadialFunction& f,
                                 const Scalar& e) {
  require(hq.dof == 1, "radial reduction is implemented for one degree of freedom");
  require(hq.is_isotropic(), "radial reduction needs beta = 0 and alpha = gamma");
  require(e.is_real(), "eigenvalue multiplier must be rational");
  Scalar a2 = hq.alpha * hq.alpha;
  const Scalar& s = f.s;
  Poly u = Poly::variable(1, 0);
  const Poly& g = f.g;
  Poly gp = g.derivative(0);
  Poly gpp = gp.derivative(0);
  Poly correction = (s * s) * (u * g) + (Scalar(2) * s) * (u * gp) + u * gpp + s * g + gp;
  Poly defect = u * g - a2 * correction - e * g;
  return RadialFunction(s, defect);
}

namespace {

// bivariate truncated jet in the two exponent-rate perturbations, with
// polynomial-in-u entries; order (d1, d2) is all gaussian_star needs
struct Jet2 {
  int d1, d2;
  std::vector<Poly> c;  // (a,b) -> a*(d2+1)+b

  Jet2(int d1, int d2) : d1(d1), d2(d2), c((d1 + 1) * (d2 + 1), Poly(1)) {}
  Poly& at(int a, int b) { return c[a * (d2 + 1) + b]; }
  const Poly& at(int a, int b) const { return c[a * (d2 + 1) + b]; }
};

Jet2 jet_mul(const Jet2& x, const Jet2& y) {
  Jet2 r(x.d1, x.d2);
  for (int a = 0; a <= x.d1; ++a)
    for (int b = 0; b <= x.d2; ++b) {
      if (x.at(a, b).is_zero()) continue;
      for (int a2 = 0; a2 + a <= x.d1; ++a2)
        for (int b2 = 0; b2 + b <= x.d2; ++b2)
          Poly::acc_mul(r.at(a + a2, b + b2), Scalar(1), x.at(a, b), y.at(a2, b2));
    }
  return r;
}

void jet_add_scaled(Jet2& dst, const Scalar& w, const Jet2& src) {
  for (size_t i = 0; i < dst.c.size(); ++i) dst.c[i] += w * src.c[i];
}

}  // namespace

RadialFunction gaussian_star(const RadialFunction& f1, const RadialFunction& f2) {
  const Scalar &s1 = f1.s, &s2 = f2.s;
  Scalar k0 = Scalar(1) + s1 * s2 * Scalar::ratio(1, 4);
  require(!k0.is_zero(), "gaussian composition is singular: 1 + s1*s2/4 vanishes");
  Scalar sout = (s1 + s2) / k0;
  if (f1.g.is_zero() || f2.g.is_zero()) return RadialFunction(sout, Poly(1));

  int d1 = f1.g.total_degree(), d2 = f2.g.total_degree();
  int depth = d1 + d2;
  auto constant = [&](const Scalar& v) { return Poly::constant(1, v); };

  // K(e) = 1 + (s1+e1)(s2+e2)/4 and S(e) = s1+s2+e1+e2 as jets
  Jet2 kj(d1, d2), sj(d1, d2);
  kj.at(0, 0) = constant(k0);
  if (d1 >= 1) kj.at(1, 0) = constant(s2 * Scalar::ratio(1, 4));
  if (d2 >= 1) kj.at(0, 1) = constant(s1 * Scalar::ratio(1, 4));
  if (d1 >= 1 && d2 >= 1) kj.at(1, 1) = constant(Scalar::ratio(1, 4));
  sj.at(0, 0) = constant(s1 + s2);
  if (d1 >= 1) sj.at(1, 0) = constant(Scalar(1));
  if (d2 >= 1) sj.at(0, 1) = constant(Scalar(1));

  // 1/K(e) as a geometric series in the nilpotent part
  Jet2 nil = kj;
  nil.at(0, 0) = Poly(1);
  Jet2 kinv(d1, d2), nilpow(d1, d2);
  nilpow.at(0, 0) = constant(Scalar(1));
  kinv.at(0, 0) = constant(Scalar(1) / k0);
  for (int j = 1; j <= depth; ++j) {
    nilpow = jet_mul(nilpow, nil);
    Scalar w = (j % 2 ? Scalar(-1) : Scalar(1)) / k0.pow(j + 1);
    jet_add_scaled(kinv, w, nilpow);
  }

  // w(e) = S/K; exp((w - w0) u) is a finite jet since w - w0 is nilpotent
  Jet2 wj = jet_mul(sj, kinv);
  Jet2 dw = wj;
  dw.at(0, 0) = Poly(1);
  Jet2 expj(d1, d2), dwpow(d1, d2);
  expj.at(0, 0) = constant(Scalar(1));
  dwpow.at(0, 0) = constant(Scalar(1));
  for (int k = 1; k <= depth; ++k) {
    dwpow = jet_mul(dwpow, dw);
    Poly uk = Poly::monomial(1, Expo{k}, Scalar(1) / factorial(k));
    for (int a = 0; a <= d1; ++a)
      for (int b = 0; b <= d2; ++b)
        if (!dwpow.at(a, b).is_zero()) expj.at(a, b) += uk * dwpow.at(a, b);
  }
  Jet2 full = jet_mul(kinv, expj);

  // g1(d/de1) g2(d/de2) of the law at e = 0: Taylor weights a! b!
  Poly gout(1);
  for (auto& [e1, c1] : f1.g.terms())
    for (auto& [e2, c2] : f2.g.terms()) {
      int a = e1[0], b = e2[0];
      gout += (c1 * c2 * factorial(a) * factorial(b)) * full.at(a, b);
    }
  return RadialFunction(sout, gout);
}

SpectralData harmonic_spectrum(int dof, int n_max) {
  require(dof >= 1, "spectrum needs at least one degree of freedom");
  require(n_max >= 0, "spectrum level must be nonnegative");
  SpectralData out;
  out.dof = dof;
  for (int n = 0; n <= n_max; ++n)
    out.eigenvalues.push_back(Scalar(mpq_class(2 * n + dof, 2)));
  if (dof != 1) return out;

  QuadHamiltonian hq(Scalar::ratio(1, 2), Scalar(0), Scalar::ratio(1, 2), 1);
  for (int n = 0; n <= n_max; ++n) {
    // power-series solution of the eigen-equation with the e^{-2u} ansatz:
    // c_{j+1} = 4 (j - n) c_j / (j+1)^2, terminating exactly at degree n
    Poly g(1);
    Scalar cj(1);
    for (int j = 0; j <= n; ++j) {
      g.add_term(Expo{j}, cj);
      cj = Scalar(4 * (j - n)) * cj / Scalar((j + 1) * (j + 1));
    }
    require(cj.is_zero(), "projector series failed to terminate", errc::check_failed);
    Scalar scale = (n % 2 ? Scalar(-2) : Scalar(2));
    RadialFunction proj(Scalar(-2), scale * g);
    Scalar e(mpq_class(2 * n + 1, 2));
    RadialFunction defect = star_eigen_defect(hq, proj, e);
    require(defect.is_zero(), "projector failed its eigen-equation certification",
            errc::check_failed);
    out.projectors.push_back(std::move(proj));
  }
  return out;
}

}  // namespace dq
