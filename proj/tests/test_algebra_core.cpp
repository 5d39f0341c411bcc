#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dq/error.hpp"
#include "dq/parse.hpp"
#include "dq/poly.hpp"
#include "dq/scalar.hpp"
#include "dq/series.hpp"

using namespace dq;

TEST_CASE("scalar rational arithmetic stays canonical") {
  Scalar a = Scalar::ratio(2, 4);  // reduces to 1/2
  Scalar b = Scalar::ratio(1, 3);
  CHECK((a + b).str() == "5/6");
  CHECK((a * b).str() == "1/6");
  CHECK((a - a).is_zero());
  CHECK(Scalar::ratio(-3, -6) == Scalar::ratio(1, 2));
}

TEST_CASE("scalar complex arithmetic") {
  Scalar i = Scalar::i();
  CHECK(i * i == Scalar(-1));
  CHECK(i.conj() == -i);
  Scalar z(mpq_class(1), mpq_class(2));  // 1 + 2i
  CHECK((z * z.conj()).str() == "5");
  CHECK((Scalar(1) / z).str() == "(1/5-2/5*i)");
  CHECK(i.pow(-1) == -i);
  CHECK((Scalar::ratio(1, 2) * i).pow(2) == Scalar::ratio(-1, 4));
  CHECK_THROWS_AS(Scalar(0).pow(-1), error);
}

TEST_CASE("polynomial ring basics") {
  auto vt = xvars(2);
  Poly x1 = Poly::variable(2, 0), x2 = Poly::variable(2, 1);
  Poly sq = (x1 + x2) * (x1 + x2);
  CHECK(sq == x1 * x1 + Scalar(2) * (x1 * x2) + x2 * x2);
  CHECK(sq.total_degree() == 2);
  CHECK((sq - sq).is_zero());

  Poly m = x1 * x1 * x2;
  CHECK(m.derivative(0) == Scalar(2) * (x1 * x2));
  CHECK(m.derivative(Expo{2, 1}) == Poly::constant(2, Scalar(2)));
  CHECK(m.derivative(Expo{0, 2}).is_zero());
}

TEST_CASE("polynomial printing and parsing round-trip") {
  auto vt = xvars(3);
  std::mt19937_64 rng(271828);
  std::uniform_int_distribution<int> expo(0, 3), coeff(-6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    Poly p(3);
    for (int t = 0; t < 5; ++t) {
      Expo e{expo(rng), expo(rng), expo(rng)};
      Scalar c = Scalar::ratio(coeff(rng), 1 + expo(rng)) +
                 Scalar::i() * Scalar::ratio(coeff(rng), 2);
      p.add_term(e, c);
    }
    CHECK(parse_poly(p.str(vt.names), vt) == p);
  }
}

TEST_CASE("parser accepts the documented grammar") {
  auto vt = pq_vars(1);
  Poly q = Poly::variable(2, 0), p = Poly::variable(2, 1);
  CHECK(parse_poly("q*p", vt) == q * p);
  CHECK(parse_poly("3/2*q^2 - p", vt) == Scalar::ratio(3, 2) * (q * q) - p);
  CHECK(parse_poly("(q + p)^2", vt) == (q + p) * (q + p));
  CHECK(parse_poly("-i*q1", vt) == -Scalar::i() * q);
  CHECK(parse_poly(" 1/2 ", vt) == Poly::constant(2, Scalar::ratio(1, 2)));
  CHECK_THROWS_AS(parse_poly("q +", vt), error);
  CHECK_THROWS_AS(parse_poly("z", vt), error);
  CHECK_THROWS_AS(parse_poly("1/0", vt), error);
  CHECK_THROWS_AS(parse_poly("q^999", vt), error);
}

TEST_CASE("series arithmetic with truncation") {
  Poly x1 = Poly::variable(1, 0);
  LambdaSeries a(1, 3), b(1, 3);
  a.set_coeff(0, Poly::constant(1, Scalar(1)));
  a.set_coeff(1, x1);
  b.set_coeff(0, Poly::constant(1, Scalar(1)));
  b.set_coeff(1, -x1);
  LambdaSeries prod = a * b;
  CHECK(prod.coeff(0) == Poly::constant(1, Scalar(1)));
  CHECK(prod.coeff(1).is_zero());
  CHECK(prod.coeff(2) == -(x1 * x1));
  CHECK(prod.coeff(3).is_zero());

  // truncation of a product is the min of the inputs
  LambdaSeries c(1, 2);
  c.set_coeff(0, Poly::constant(1, Scalar(1)));
  CHECK((a * c).trunc() == 2);
}

TEST_CASE("series negative tail shifts into positive slots") {
  Poly x1 = Poly::variable(1, 0);
  LambdaSeries inv(1, 2);
  inv.set_coeff(-1, Poly::constant(1, Scalar(1)));  // L^-1
  LambdaSeries lin(1, 2);
  lin.set_coeff(1, x1);  // x1*L
  LambdaSeries prod = inv * lin;
  CHECK(prod.coeff(0) == x1);
  CHECK(prod.neg_size() == 0);
  CHECK(prod.str({"x1"}) == "x1");
}

TEST_CASE("checked division catches bad patterns") {
  Poly x1 = Poly::variable(1, 0);
  LambdaSeries s(1, 3);
  s.set_coeff(2, x1);
  LambdaSeries d = s.checked_div(2);
  CHECK(d.trunc() == 1);
  CHECK(d.coeff(0) == x1);

  LambdaSeries bad(1, 3);
  bad.set_coeff(0, x1);
  CHECK_THROWS_AS(bad.checked_div(1), error);
}

TEST_CASE("substitution lambda = (i/2) h") {
  Poly one = Poly::constant(1, Scalar(1));
  LambdaSeries s(1, 2);
  s.set_coeff(2, one);  // L^2
  LambdaSeries h = s.substitute_hbar();
  CHECK(h.sym() == Sym::hbar);
  CHECK(h.coeff(2) == Scalar::ratio(-1, 4) * one);  // (i/2)^2 = -1/4

  LambdaSeries withneg(1, 2);
  withneg.set_coeff(-1, one);
  CHECK_THROWS_AS(withneg.substitute_hbar(false), error);
  LambdaSeries hn = withneg.substitute_hbar(true);
  CHECK(hn.coeff(-1) == (Scalar::i() * Scalar::ratio(1, 2)).pow(-1) * one);
}

TEST_CASE("series printing format") {
  auto vt = pq_vars(1);
  Poly q = Poly::variable(2, 0), p = Poly::variable(2, 1);
  LambdaSeries s(2, 3);
  s.set_coeff(0, q * p);
  s.set_coeff(1, Poly::constant(2, Scalar(1)));
  CHECK(s.str(vt.names) == "q*p + (1)*L");
  s.set_coeff(2, Scalar(2) * (q * q));
  CHECK(s.str(vt.names) == "q*p + (1)*L + (2*q^2)*L^2");
  LambdaSeries z(2, 1);
  CHECK(z.str(vt.names) == "0");
}
