#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <functional>
#include <random>
#include <vector>

#include "dq/error.hpp"
#include "dq/fedosov.hpp"
#include "dq/moyal.hpp"
#include "dq/polydiff.hpp"

using namespace dq;

namespace {

Poly rand_poly(std::mt19937_64& rng, int dim) {
  Poly p(dim);
  std::uniform_int_distribution<int> expo(0, 2);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int t = 0; t < 3; ++t) {
    Expo e(dim, 0);
    for (int v = 0; v < dim; ++v) e[v] = expo(rng);
    p.add_term(e, Scalar(num(rng)));
  }
  return p;
}

// random section with a cap that may exceed the degree of any term, so that
// later compositions stay complete in the window under test
WeylSection rand_section(std::mt19937_64& rng, int dim, int dmax, int degcap) {
  WeylSection s(dim, dmax);
  std::uniform_int_distribution<int> kd(0, 2);
  std::uniform_int_distribution<int> ad(0, 2);
  std::uniform_int_distribution<int> bd(0, (1 << dim) - 1);
  for (int t = 0; t < 4; ++t) {
    const int k = kd(rng);
    Expo alpha(dim, 0);
    int deg = 2 * k;
    for (int v = 0; v < dim; ++v) {
      alpha[v] = ad(rng);
      deg += alpha[v];
    }
    if (deg > degcap) continue;
    s.add_term(k, alpha, unsigned(bd(rng)), rand_poly(rng, dim));
  }
  return s;
}

// homogeneous in form degree, for graded identities
WeylSection rand_form(std::mt19937_64& rng, int dim, int dmax, unsigned beta) {
  WeylSection s(dim, dmax);
  std::uniform_int_distribution<int> kd(0, 1);
  std::uniform_int_distribution<int> ad(0, 2);
  for (int t = 0; t < 3; ++t) {
    Expo alpha(dim, 0);
    for (int v = 0; v < dim; ++v) alpha[v] = ad(rng);
    s.add_term(kd(rng), alpha, beta, rand_poly(rng, dim));
  }
  return s;
}

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code;
  }
  REQUIRE(false);
  return errc::invalid_input;
}

// R^2 with the standard form and the curved symplectic connection whose only
// symbol is Gamma^2_{11} = x2
SymplecticData curved_plane() {
  std::vector<std::vector<Poly>> om(2, std::vector<Poly>(2, Poly(2)));
  om[0][1] = Poly::constant(2, Scalar(1));
  om[1][0] = Poly::constant(2, Scalar(-1));
  std::vector<std::vector<std::vector<Poly>>> ga(
      2, std::vector<std::vector<Poly>>(2, std::vector<Poly>(2, Poly(2))));
  ga[1][0][0] = Poly::variable(2, 1);
  return SymplecticData(2, std::move(om), std::move(ga));
}

// R^4 with an x-dependent closed form of constant determinant and the
// matching constant connection; the curvature vanishes but nabla_hat does not
SymplecticData warped_chart() {
  std::vector<std::vector<Poly>> om(4, std::vector<Poly>(4, Poly(4)));
  om[0][2] = Poly::constant(4, Scalar(1));
  om[2][0] = Poly::constant(4, Scalar(-1));
  om[1][3] = Poly::constant(4, Scalar(1));
  om[3][1] = Poly::constant(4, Scalar(-1));
  om[0][1] = Scalar(2) * Poly::variable(4, 0);
  om[1][0] = Scalar(-2) * Poly::variable(4, 0);
  std::vector<std::vector<std::vector<Poly>>> ga(
      4, std::vector<std::vector<Poly>>(4, std::vector<Poly>(4, Poly(4))));
  ga[3][0][0] = Poly::constant(4, Scalar(-2));
  return SymplecticData(4, std::move(om), std::move(ga));
}

// the 1-form generating delta as (1/2L)[s, .]
WeylSection delta_generator(const SymplecticData& sd, int dmax) {
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

WeylSection minus_omega_section(const SymplecticData& sd, int dmax) {
  WeylSection s(sd.dim(), dmax);
  for (int i = 0; i < sd.dim(); ++i)
    for (int j = i + 1; j < sd.dim(); ++j)
      s.add_term(0, Expo(sd.dim(), 0), (1u << i) | (1u << j), -sd.omega(i, j));
  return s;
}

WeylSection lambda_shift(const WeylSection& a, int k) {
  WeylSection out(a.dim(), a.dmax());
  for (const auto& [key, c] : a.terms()) out.add_term(key.k + k, key.alpha, key.beta, c);
  return out;
}

}  // namespace

TEST_CASE("chart data is validated on construction") {
  SymplecticData sd = SymplecticData::standard(1);
  CHECK(sd.dim() == 2);
  CHECK(sd.omega(0, 1) == Poly::constant(2, Scalar(1)));
  CHECK(sd.poisson(0, 1) == Poly::constant(2, Scalar(1)));
  CHECK(sd.poisson(1, 0) == Poly::constant(2, Scalar(-1)));
  CHECK(sd.flat_connection());

  SymplecticData sd2 = SymplecticData::standard(2);
  CHECK(sd2.poisson(0, 2) == Poly::constant(4, Scalar(1)));
  CHECK(sd2.poisson(1, 3) == Poly::constant(4, Scalar(1)));
  CHECK(sd2.poisson(0, 1).is_zero());

  // not antisymmetric
  CHECK(code_of([] {
          std::vector<std::vector<Poly>> om(2, std::vector<Poly>(2, Poly(2)));
          om[0][1] = Poly::constant(2, Scalar(1));
          om[1][0] = Poly::constant(2, Scalar(1));
          SymplecticData bad(2, om);
        }) == errc::invalid_input);
  // odd dimension
  CHECK(code_of([] {
          SymplecticData bad(3, std::vector<std::vector<Poly>>(
                                    3, std::vector<Poly>(3, Poly(3))));
        }) == errc::invalid_input);
  // degenerate
  CHECK(code_of([] {
          SymplecticData bad(2, std::vector<std::vector<Poly>>(
                                    2, std::vector<Poly>(2, Poly(2))));
        }) == errc::invalid_input);
  // nonconstant determinant
  CHECK(code_of([] {
          std::vector<std::vector<Poly>> om(2, std::vector<Poly>(2, Poly(2)));
          om[0][1] = Poly::constant(2, Scalar(1)) + Poly::variable(2, 0);
          om[1][0] = -om[0][1];
          SymplecticData bad(2, om);
        }) == errc::invalid_input);
  // not closed
  CHECK(code_of([] {
          std::vector<std::vector<Poly>> om(4, std::vector<Poly>(4, Poly(4)));
          om[0][2] = Poly::constant(4, Scalar(1));
          om[2][0] = Poly::constant(4, Scalar(-1));
          om[1][3] = Poly::constant(4, Scalar(1));
          om[3][1] = Poly::constant(4, Scalar(-1));
          om[0][1] = Poly::variable(4, 2);
          om[1][0] = -om[0][1];
          SymplecticData bad(4, om);
        }) == errc::invalid_input);
  // torsion
  CHECK(code_of([] {
          std::vector<std::vector<Poly>> om(2, std::vector<Poly>(2, Poly(2)));
          om[0][1] = Poly::constant(2, Scalar(1));
          om[1][0] = Poly::constant(2, Scalar(-1));
          std::vector<std::vector<std::vector<Poly>>> ga(
              2, std::vector<std::vector<Poly>>(2, std::vector<Poly>(2, Poly(2))));
          ga[0][0][1] = Poly::constant(2, Scalar(1));
          SymplecticData bad(2, om, ga);
        }) == errc::invalid_input);
  // does not preserve omega
  CHECK(code_of([] {
          std::vector<std::vector<Poly>> om(2, std::vector<Poly>(2, Poly(2)));
          om[0][1] = Poly::constant(2, Scalar(1));
          om[1][0] = Poly::constant(2, Scalar(-1));
          std::vector<std::vector<std::vector<Poly>>> ga(
              2, std::vector<std::vector<Poly>>(2, std::vector<Poly>(2, Poly(2))));
          ga[0][0][0] = Poly::constant(2, Scalar(1));
          SymplecticData bad(2, om, ga);
        }) == errc::invalid_input);

  // x-dependent omega with the compatible connection passes every check
  SymplecticData warped = warped_chart();
  CHECK(!warped.flat_connection());
  CHECK(warped.poisson(0, 2) == Poly::constant(4, Scalar(1)));
  CHECK(warped.poisson(2, 3) == Scalar(-2) * Poly::variable(4, 0));

  SymplecticData curved = curved_plane();
  CHECK(!curved.flat_connection());
}

TEST_CASE("delta operators satisfy the textbook identities") {
  const int dim = 2, dmax = 8;

  // delta(y1) = dx1 and delta_star(dx1) = y1
  WeylSection y1(dim, dmax);
  y1.add_term(0, Expo{1, 0}, 0u, Poly::constant(dim, Scalar(1)));
  WeylSection dx1(dim, dmax);
  dx1.add_term(0, Expo{0, 0}, 1u, Poly::constant(dim, Scalar(1)));
  CHECK(delta_op(y1) == dx1);
  CHECK(delta_star(dx1) == y1);

  // (delta delta_star + delta_star delta)(y1 dx2) = 2 y1 dx2
  WeylSection m(dim, dmax);
  m.add_term(0, Expo{1, 0}, 2u, Poly::constant(dim, Scalar(1)));
  CHECK(delta_op(delta_star(m)) + delta_star(delta_op(m)) == Scalar(2) * m);

  // delta_star raises total degree by one, so give the carriers one spare
  // degree of headroom or cap-saturating terms lose their preimage
  std::mt19937_64 rng(2203);
  for (int t = 0; t < 20; ++t) {
    WeylSection a = rand_section(rng, dim, dmax + 1, dmax);
    CHECK(delta_op(delta_op(a)).is_zero());
    CHECK(delta_star(delta_star(a)).is_zero());
    CHECK(delta_inv(delta_inv(a)).is_zero());

    HodgeParts h = hodge_decompose(a);
    CHECK(h.exact + h.coexact + h.center == a);
  }
  for (int t = 0; t < 10; ++t) {
    WeylSection a = rand_section(rng, 4, dmax + 1, dmax);
    HodgeParts h = hodge_decompose(a);
    CHECK(h.exact + h.coexact + h.center == a);
  }

  // on a term with p y's and q dx's the anticommutator scales by p + q
  WeylSection term(dim, dmax);
  term.add_term(1, Expo{2, 1}, 2u, Poly::variable(dim, 0));
  CHECK(delta_op(delta_star(term)) + delta_star(delta_op(term)) ==
        Scalar(4) * term);
}

TEST_CASE("fiber composition is the Moyal product in the fiber") {
  SymplecticData sd = SymplecticData::standard(1);
  const int dmax = 8;
  WeylSection y1(2, dmax), y2(2, dmax);
  y1.add_term(0, Expo{1, 0}, 0u, Poly::constant(2, Scalar(1)));
  y2.add_term(0, Expo{0, 1}, 0u, Poly::constant(2, Scalar(1)));

  // [y1, y2] = 2 L {y1, y2} = 2 L
  WeylSection comm = fiber_compose(sd, y1, y2) - fiber_compose(sd, y2, y1);
  WeylSection expect(2, dmax);
  expect.add_term(1, Expo{0, 0}, 0u, Poly::constant(2, Scalar(2)));
  CHECK(comm == expect);
  CHECK(graded_bracket(sd, y1, y2) == expect);

  // unit law and associativity (exact under the shared cap: composing only
  // raises total degree, so truncated pairs stay truncated on both sides)
  std::mt19937_64 rng(40961);
  for (int t = 0; t < 8; ++t) {
    WeylSection a = rand_section(rng, 2, dmax, dmax);
    WeylSection b = rand_section(rng, 2, dmax, dmax);
    WeylSection c = rand_section(rng, 2, dmax, dmax);
    CHECK(fiber_compose(sd, WeylSection::unit(2, dmax), a) == a);
    CHECK(fiber_compose(sd, a, WeylSection::unit(2, dmax)) == a);
    CHECK(fiber_compose(sd, fiber_compose(sd, a, b), c) ==
          fiber_compose(sd, a, fiber_compose(sd, b, c)));
  }

  // associativity also holds against an x-dependent fiber Poisson matrix
  SymplecticData warped = warped_chart();
  for (int t = 0; t < 4; ++t) {
    WeylSection a = rand_section(rng, 4, 6, 6);
    WeylSection b = rand_section(rng, 4, 6, 6);
    WeylSection c = rand_section(rng, 4, 6, 6);
    CHECK(fiber_compose(warped, fiber_compose(warped, a, b), c) ==
          fiber_compose(warped, a, fiber_compose(warped, b, c)));
  }

  // graded sign: odd-odd bracket is the anticommutator
  WeylSection a1(2, dmax), b1(2, dmax);
  a1.add_term(0, Expo{1, 0}, 1u, Poly::constant(2, Scalar(1)));  // y1 dx1
  b1.add_term(0, Expo{0, 1}, 2u, Poly::constant(2, Scalar(1)));  // y2 dx2
  WeylSection anti = fiber_compose(sd, a1, b1) + fiber_compose(sd, b1, a1);
  WeylSection expect2(2, dmax);
  expect2.add_term(1, Expo{0, 0}, 3u, Poly::constant(2, Scalar(2)));
  CHECK(anti == expect2);
  CHECK(graded_bracket(sd, a1, b1) == anti);

  // graded antisymmetry on homogeneous forms
  for (unsigned ba : {0u, 1u, 3u})
    for (unsigned bb : {0u, 2u, 3u}) {
      if (ba & bb) continue;
      WeylSection a = rand_form(rng, 2, dmax, ba);
      WeylSection b = rand_form(rng, 2, dmax, bb);
      const int pq = std::popcount(ba) * std::popcount(bb);
      WeylSection lhs = graded_bracket(sd, a, b);
      WeylSection rhs = graded_bracket(sd, b, a);
      if (pq % 2) {
        CHECK(lhs == rhs);
      } else {
        CHECK(lhs == -rhs);
      }
    }
}

TEST_CASE("delta is an inner derivation and nabla_hat squares to the curvature") {
  std::mt19937_64 rng(5521);
  for (const SymplecticData& sd :
       {SymplecticData::standard(1), curved_plane()}) {
    WeylSection s = delta_generator(sd, 10);
    for (int t = 0; t < 10; ++t) {
      WeylSection a = rand_section(rng, sd.dim(), 10, 7);
      CHECK(div_2lambda(graded_bracket(sd, s, a)) == delta_op(a));
    }
  }
  SymplecticData warped = warped_chart();
  WeylSection sw = delta_generator(warped, 8);
  for (int t = 0; t < 4; ++t) {
    WeylSection a = rand_section(rng, 4, 8, 4);
    CHECK(div_2lambda(graded_bracket(warped, sw, a)) == delta_op(a));
  }

  // flat chart: nabla_hat is the x-differential and the curvature vanishes
  SymplecticData flat = SymplecticData::standard(1);
  Poly f = rand_poly(rng, 2);
  WeylSection df(2, 8);
  df.add_term(0, Expo{0, 0}, 1u, f.derivative(0));
  df.add_term(0, Expo{0, 0}, 2u, f.derivative(1));
  CHECK(nabla_hat(flat, WeylSection::scalar(f, 8)) == df);
  CHECK(curvature_section(flat, 8).is_zero());
  CHECK(curvature_section(warped, 8).is_zero());

  // curved plane: frozen curvature section -(1/2) y1^2 dx1 dx2
  SymplecticData curved = curved_plane();
  WeylSection rt = curvature_section(curved, 8);
  WeylSection expect(2, 8);
  expect.add_term(0, Expo{2, 0}, 3u, Poly::constant(2, Scalar::ratio(-1, 2)));
  CHECK(rt == expect);

  // nabla_hat^2 = -(1/2L)[curvature, .] on arbitrary sections
  WeylSection rt10 = curvature_section(curved, 10);
  for (int t = 0; t < 10; ++t) {
    WeylSection a = rand_section(rng, 2, 10, 7);
    CHECK(nabla_hat(curved, nabla_hat(curved, a)) ==
          -div_2lambda(graded_bracket(curved, rt10, a)));
  }
}

TEST_CASE("solve_r meets its certificates and the frozen curved solution") {
  // flat charts have r = 0 in any dimension
  for (int dof : {1, 2}) {
    FedosovConnection fc = solve_r(SymplecticData::standard(dof), 8);
    CHECK(fc.r().is_zero());
    CHECK(weyl_curvature(fc).truncate(8) ==
          minus_omega_section(fc.data(), 10));
  }

  // zero curvature with nonzero symbols still gives r = 0
  FedosovConnection fw = solve_r(warped_chart(), 6);
  CHECK(fw.r().is_zero());
  CHECK(weyl_curvature(fw).truncate(6) == minus_omega_section(fw.data(), 8));

  // curved plane: r starts at total degree 3 with the frozen leading part
  SymplecticData curved = curved_plane();
  FedosovConnection fc = solve_r(curved, 8);
  CHECK(!fc.r().is_zero());
  CHECK(fc.r().min_degree() == 3);
  WeylSection lead(2, 10);
  lead.add_term(0, Expo{3, 0}, 2u, Poly::constant(2, Scalar::ratio(-1, 8)));
  lead.add_term(0, Expo{2, 1}, 1u, Poly::constant(2, Scalar::ratio(1, 8)));
  CHECK(fc.r().truncate(3) == lead);
  CHECK(delta_inv(fc.r()).is_zero());

  // recursion residual, reassembled from public operations
  WeylSection residual = delta_op(fc.r()) - curvature_section(curved, 10) -
                         nabla_hat(curved, fc.r()) +
                         div_2lambda(fiber_compose(curved, fc.r(), fc.r()));
  CHECK(residual.truncate(8).is_zero());
  CHECK(weyl_curvature(fc).truncate(8) == minus_omega_section(curved, 10));

  // the covariant derivative squares to zero well inside the degree cap
  std::mt19937_64 rng(77041);
  for (int t = 0; t < 6; ++t) {
    WeylSection a = rand_section(rng, 2, 10, 4);
    CHECK(fedosov_derivative(fc, fedosov_derivative(fc, a)).truncate(6).is_zero());
  }
}

TEST_CASE("horizontal lifts are flat sections with the right symbol") {
  FedosovConnection flat = solve_r(SymplecticData::standard(1), 8);

  WeylSection lx = horizontal_lift(Poly::variable(2, 0), flat);
  WeylSection expect(2, 10);
  expect.add_term(0, Expo{0, 0}, 0u, Poly::variable(2, 0));
  expect.add_term(0, Expo{1, 0}, 0u, Poly::constant(2, Scalar(1)));
  CHECK(lx == expect);

  Poly x1 = Poly::variable(2, 0);
  WeylSection lx2 = horizontal_lift(x1 * x1, flat);
  WeylSection expect2(2, 10);
  expect2.add_term(0, Expo{0, 0}, 0u, x1 * x1);
  expect2.add_term(0, Expo{1, 0}, 0u, Scalar(2) * x1);
  expect2.add_term(0, Expo{2, 0}, 0u, Poly::constant(2, Scalar(1)));
  CHECK(lx2 == expect2);

  CHECK(horizontal_lift(Poly::constant(2, Scalar(1)), flat) ==
        WeylSection::unit(2, 10));

  // the symbol returns the input and D kills the lift, on every chart
  std::mt19937_64 rng(90407);
  FedosovConnection curved = solve_r(curved_plane(), 8);
  for (int t = 0; t < 6; ++t) {
    Poly f = rand_poly(rng, 2);
    for (const FedosovConnection* fc : {&flat, &curved}) {
      WeylSection a = horizontal_lift(f, *fc);
      CHECK(symbol(a, 4) == LambdaSeries::from_poly(f, 4));
      CHECK(fedosov_derivative(*fc, a).truncate(8).is_zero());
    }
  }

  // composing lifts keeps sections flat, and lifting the symbol returns the
  // composition: the quantization is an algebra isomorphism onto its image
  for (const FedosovConnection* fc : {&flat, &curved}) {
    Poly f = Poly::variable(2, 0) * Poly::variable(2, 0);
    Poly g = Poly::variable(2, 0) * Poly::variable(2, 1);
    WeylSection prod =
        fiber_compose(fc->data(), horizontal_lift(f, *fc), horizontal_lift(g, *fc));
    CHECK(fedosov_derivative(*fc, prod).truncate(8).is_zero());
    LambdaSeries sym = symbol(prod, 4);
    WeylSection relift(2, prod.dmax());
    for (int k = 0; k <= 4; ++k) {
      if (sym.coeff(k).is_zero()) continue;
      relift += lambda_shift(horizontal_lift(sym.coeff(k), *fc), k);
    }
    CHECK(relift.truncate(8) == prod.truncate(8));
  }

  CHECK(code_of([&] { horizontal_lift(Poly::variable(3, 0), flat); }) ==
        errc::invalid_input);
}

TEST_CASE("flat-chart products match the phase-space star product") {
  FedosovConnection fc = solve_r(SymplecticData::standard(1), 8);
  FlatSymplectic fs(1);
  Poly q = Poly::variable(2, 0), p = Poly::variable(2, 1);

  LambdaSeries qp = fedosov_star(q, p, fc, 8);
  CHECK(qp.coeff(0) == q * p);
  CHECK(qp.coeff(1) == Poly::constant(2, Scalar(1)));
  CHECK(qp.coeff(2).is_zero());
  LambdaSeries pq = fedosov_star(p, q, fc, 8);
  CHECK(pq.coeff(1) == Poly::constant(2, Scalar(-1)));

  LambdaSeries q2p2 = fedosov_star(q * q, p * p, fc, 8);
  CHECK(q2p2.coeff(0) == q * q * p * p);
  CHECK(q2p2.coeff(1) == Scalar(4) * (q * p));
  CHECK(q2p2.coeff(2) == Poly::constant(2, Scalar(2)));
  CHECK(q2p2.coeff(3).is_zero());

  std::mt19937_64 rng(31415);
  for (int t = 0; t < 10; ++t) {
    Poly f = rand_poly(rng, 2);
    Poly g = rand_poly(rng, 2);
    LambdaSeries mine = fedosov_star(f, g, fc, 8);
    LambdaSeries ref = moyal_star(fs, f, g, 4);
    for (int k = 0; k <= 4; ++k) CHECK(mine.coeff(k) == ref.coeff(k));
  }

  // operator-level agreement of the first three cochains
  StarProduct sp = fedosov_cochains(fc, 3);
  StarProduct ref = moyal_star(fs, 3);
  for (int r = 1; r <= 3; ++r) CHECK(sp.cochain(r) == ref.cochain(r));

  CHECK(code_of([&] {
          fedosov_star(Poly::variable(2, 0), Poly::variable(2, 1), fc, 9);
        }) == errc::resource_bound);
  CHECK(code_of([&] { fedosov_cochains(fc, 5); }) == errc::resource_bound);
}

TEST_CASE("curved charts still produce associative star products") {
  FedosovConnection fc = solve_r(curved_plane(), 8);
  StarProduct sp = fedosov_cochains(fc, 3);
  CHECK(sp.cochain(1) == PoissonStructure::standard(1).as_operator());
  for (int r = 1; r <= 3; ++r) CHECK(sp.associativity_defect(r).is_zero());

  // the warped chart quantizes an x-dependent Poisson matrix
  FedosovConnection fw = solve_r(warped_chart(), 6);
  std::vector<std::vector<Poly>> mat(4, std::vector<Poly>(4, Poly(4)));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) mat[i][j] = fw.data().poisson(i, j);
  PoissonStructure ps(4, std::move(mat));
  CHECK(ps.is_poisson());
  StarProduct sw = fedosov_cochains(fw, 2);
  CHECK(sw.cochain(1) == ps.as_operator());
  for (int r = 1; r <= 2; ++r) CHECK(sw.associativity_defect(r).is_zero());
}

TEST_CASE("misuse of the half lambda division is rejected") {
  WeylSection a(2, 6);
  a.add_term(0, Expo{1, 0}, 0u, Poly::constant(2, Scalar(1)));
  CHECK(code_of([&] { div_2lambda(a); }) == errc::invalid_input);
}
