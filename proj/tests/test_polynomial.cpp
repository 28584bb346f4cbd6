#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "strataforms/polynomial.hpp"

using namespace strataforms;

TEST_CASE("arithmetic is exact and canonical") {
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);
  Polynomial p = x * x + y * Rational(3) - Polynomial::constant(2, Rational(1, 2));
  CHECK(p.eval({Rational(2), Rational(1, 3)}) == Rational(4) + 1 - Rational(1, 2));
  CHECK((p - p).is_zero());
  CHECK(p.total_degree() == 2);

  // cancellation removes stored terms
  Polynomial q = x * y - x * y;
  CHECK(q.is_zero());
  CHECK(q.terms().empty());
}

TEST_CASE("derivative and product rule") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial a = oracles::random_polynomial(rng, 3, 3, 4);
    Polynomial b = oracles::random_polynomial(rng, 3, 3, 4);
    for (int i = 0; i < 3; ++i) {
      Polynomial lhs = (a * b).derivative(i);
      Polynomial rhs = a.derivative(i) * b + a * b.derivative(i);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("substitution composes evaluation") {
  std::mt19937_64 rng(7);
  Polynomial p = oracles::random_polynomial(rng, 2, 3, 5);
  std::vector<Polynomial> subs = {oracles::random_polynomial(rng, 3, 2, 3),
                                  oracles::random_polynomial(rng, 3, 2, 3)};
  Polynomial comp = p.substitute(subs);
  std::vector<Rational> u = {Rational(1, 3), Rational(-2, 5), Rational(1)};
  std::vector<Rational> x = {subs[0].eval(u), subs[1].eval(u)};
  CHECK(comp.eval(u) == p.eval(x));
}

TEST_CASE("unit-interval integration drops the variable") {
  // ∫0^1 (x^2 t^3 + t) dt = x^2/4 + 1/2
  Polynomial p(2);
  p.add_term({2, 3}, Rational(1));
  p.add_term({0, 1}, Rational(1));
  Polynomial r = p.integrate_unit_drop(1);
  CHECK(r.nvars() == 1);
  CHECK(r.eval(std::vector<Rational>{Rational(2)}) == Rational(1) + Rational(1, 2));
}

TEST_CASE("zero-variable polynomials act as constants") {
  Polynomial c = Polynomial::constant(0, Rational(5, 7));
  CHECK(c.eval(std::vector<Rational>{}) == Rational(5, 7));
  CHECK(c.is_constant());
}
