#pragma once
#include <map>
#include <string>
#include <vector>

#include "dq/deformation.hpp"
#include "dq/poly.hpp"
#include "dq/series.hpp"

namespace dq {

/**
 * Symplectic chart data on R^{2m}: a closed nondegenerate 2-form omega with
 * polynomial entries and an optional torsionless omega-preserving connection
 * given by Christoffel symbols gamma[l][i][j] (upper index first).  The
 * fiberwise Poisson matrix is -omega^{-1}; exactness requires det(omega) to
 * be a nonzero constant on the chart, which is validated at construction
 * along with d(omega) = 0 and the connection identities.
 */
class SymplecticData {
 public:
  SymplecticData(int dim, std::vector<std::vector<Poly>> omega,
                 std::vector<std::vector<std::vector<Poly>>> gamma = {});
  // omega in (q_1..q_m, p_1..p_m) block form with omega(q_a, p_a) = +1
  static SymplecticData standard(int dof);

  int dim() const { return dim_; }
  const Poly& omega(int i, int j) const { return omega_[i][j]; }
  // fiber Poisson matrix entries, {y^i, y^j} = poisson(i, j)
  const Poly& poisson(int i, int j) const { return poisson_[i][j]; }
  const Poly& christoffel(int l, int i, int j) const { return gamma_[l][i][j]; }
  bool flat_connection() const;

 private:
  int dim_;
  std::vector<std::vector<Poly>> omega_;
  std::vector<std::vector<Poly>> poisson_;
  std::vector<std::vector<std::vector<Poly>>> gamma_;
};

/**
 * Polynomial section of the Weyl bundle tensored with forms on the chart:
 * a finite sum of terms L^k c(x) y^alpha (dx)^beta with (dx)^beta the wedge
 * of the dx^i for the bits of beta in increasing order.  Terms are graded by
 * the total degree 2k + |alpha|; every operation drops terms above the
 * section's cap dmax.  Equality compares dim and terms, not the cap.
 */
class WeylSection {
 public:
  struct Key {
    int k;
    Expo alpha;
    unsigned beta;
    bool operator<(const Key& o) const {
      if (k != o.k) return k < o.k;
      if (alpha != o.alpha) return alpha < o.alpha;
      return beta < o.beta;
    }
    bool operator==(const Key& o) const {
      return k == o.k && alpha == o.alpha && beta == o.beta;
    }
  };

  WeylSection(int dim, int dmax);
  static WeylSection scalar(const Poly& f, int dmax);  // y-, dx-, L-free
  static WeylSection unit(int dim, int dmax);

  int dim() const { return dim_; }
  int dmax() const { return dmax_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Poly>& terms() const { return terms_; }

  // accumulate one term (beta already in canonical ascending order); zero
  // coefficients and terms above the cap are pruned
  void add_term(int k, const Expo& alpha, unsigned beta, const Poly& c);

  WeylSection truncate(int maxdeg) const;  // keep total degree <= maxdeg
  int min_degree() const;                  // -1 for the zero section

  WeylSection operator-() const;
  WeylSection& operator+=(const WeylSection& o);
  WeylSection& operator-=(const WeylSection& o);
  friend WeylSection operator+(WeylSection a, const WeylSection& b) { return a += b; }
  friend WeylSection operator-(WeylSection a, const WeylSection& b) { return a -= b; }
  friend WeylSection operator*(const Scalar& s, WeylSection a);
  friend bool operator==(const WeylSection& a, const WeylSection& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const WeylSection& a, const WeylSection& b) { return !(a == b); }

  std::string str(const std::vector<std::string>& names) const;

 private:
  int dim_;
  int dmax_;
  std::map<Key, Poly> terms_;
};

// fiberwise Moyal product in y against the chart's Poisson matrix, wedge in
// dx; the result carries the smaller of the two caps
WeylSection fiber_compose(const SymplecticData& sd, const WeylSection& a,
                          const WeylSection& b);
// a o b - (-1)^{pq} b o a on form-homogeneous pieces
WeylSection graded_bracket(const SymplecticData& sd, const WeylSection& a,
                           const WeylSection& b);

WeylSection delta_op(const WeylSection& a);    // sum_j dx^j ^ d_{y^j} a
WeylSection delta_star(const WeylSection& a);  // sum_j y^j i(d_j) a
WeylSection delta_inv(const WeylSection& a);   // delta_star/(p+q), zero on p+q=0

struct HodgeParts {
  WeylSection exact;    // delta delta_inv a
  WeylSection coexact;  // delta_inv delta a
  WeylSection center;   // the y- and dx-free part
};
HodgeParts hodge_decompose(const WeylSection& a);  // parts sum to a exactly

// dx^i ^ (d_{x^i} - Gamma^l_{ik} y^k d_{y^l})
WeylSection nabla_hat(const SymplecticData& sd, const WeylSection& a);
// curvature section (1/4) omega_{lm} R^m_{kij} y^l y^k dx^i ^ dx^j with
// nabla_hat^2 a = -(1/2L)[curvature, a]
WeylSection curvature_section(const SymplecticData& sd, int dmax);

// divide by 2L; every term must carry a positive L-power
WeylSection div_2lambda(const WeylSection& a);

// central part as a series in L up to the given order
LambdaSeries symbol(const WeylSection& a, int order);

/** The flat connection produced by solve_r; query-only. */
class FedosovConnection {
 public:
  const SymplecticData& data() const { return sd_; }
  const WeylSection& r() const { return r_; }
  int dmax() const { return dmax_; }

 private:
  FedosovConnection(SymplecticData sd, WeylSection r, int dmax)
      : sd_(std::move(sd)), r_(std::move(r)), dmax_(dmax) {}
  friend FedosovConnection solve_r(const SymplecticData& sd, int dmax);

  SymplecticData sd_;
  WeylSection r_;
  int dmax_;
};

// iterate r = delta_inv(curvature + nabla_hat r - (1/2L) r o r) to its fixed
// point, then certify delta_inv r = 0, a vanishing recursion residual, and a
// Weyl curvature equal to -omega through dmax (errc::check_failed otherwise)
FedosovConnection solve_r(const SymplecticData& sd, int dmax);

// D a = -delta a + nabla_hat a - (1/2L)[r, a]
WeylSection fedosov_derivative(const FedosovConnection& fc, const WeylSection& a);
// curvature of D, central and equal to -omega for a solved connection
WeylSection weyl_curvature(const FedosovConnection& fc);

// the unique section with D a = 0 and central part f, by the degree-raising
// fixed point a = f + delta_inv(nabla_hat a - (1/2L)[r, a]); the D-residual
// is certified through dmax
WeylSection horizontal_lift(const Poly& f, const FedosovConnection& fc);

// project the composition of the two lifts back to the center; the series is
// truncated at L-order dmax/2, and dmax must not exceed the connection's
// (errc::resource_bound names the required bound)
LambdaSeries fedosov_star(const Poly& f, const Poly& g, const FedosovConnection& fc,
                          int dmax);

// reconstruct the star-product cochains C_1..C_order as polydifferential
// operators from values on monomial pairs (order <= r derivatives per slot),
// certified against fresh product values on random pairs
StarProduct fedosov_cochains(const FedosovConnection& fc, int order);

}  // namespace dq
