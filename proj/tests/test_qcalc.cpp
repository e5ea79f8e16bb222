#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "tg/error.hpp"
#include "tg/groupoid.hpp"
#include "tg/qcalc.hpp"
#include "tg/rng.hpp"

using namespace tg;

TEST_CASE("shift derivative") {
  ScalarField sq = parse_field("x0^2", 1);
  CHECK(lambda_derivative(sq, 1.0, 0.5) == 2.5);

  ScalarField lin = parse_field("x0", 1);
  // exact on dyadic-friendly inputs, one ulp otherwise
  for (double lambda : {0.5, -0.25, 2.0}) {
    CHECK(lambda_derivative(lin, 0.25, lambda) == 1.0);
  }
  CHECK(lambda_derivative(lin, 0.4, 0.7) == doctest::Approx(1.0).epsilon(1e-14));

  try {
    lambda_derivative(sq, 1.0, 0.0);
    FAIL("expected ZeroDeformation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroDeformation);
  }
}

TEST_CASE("shift derivative error is half the second derivative times lambda") {
  ScalarField f = parse_field("exp(x0)", 1);
  double prev = 0;
  int step = 0;
  for (double lambda : {0.1, 0.05, 0.025}) {
    double err = std::abs(lambda_derivative(f, 0.0, lambda) - 1.0);
    CHECK(err <= (lambda / 2) * std::exp(lambda) + 1e-12);  // max |f''| on [0, lambda]
    if (step++) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    ScalarField p = random_polynomial(rng, 1, 4, -2.0, 2.0);
    double x = rng.uniform(-1.0, 1.0);
    double lambda = rng.uniform(0.01, 0.2);
    ScalarField fp = differentiate(p, 0);
    ScalarField fpp = differentiate(fp, 0);
    double max_second = 0;
    for (int s = 0; s <= 20; ++s) {
      max_second = std::max(max_second, std::abs(eval(fpp, vec1(x + lambda * s / 20.0))));
    }
    double err = std::abs(lambda_derivative(p, x, lambda) - eval(fp, vec1(x)));
    CHECK(err <= (lambda / 2) * max_second + 1e-10);
  }
}

TEST_CASE("Jackson derivative") {
  ScalarField sq = parse_field("x0^2", 1);
  CHECK(jackson_derivative(sq, 1.0, 2.0) == 3.0);

  // monomials: D_q x^n = [n]_q x^(n-1), exactly on dyadic-friendly inputs
  for (int n = 1; n <= 6; ++n) {
    ScalarField mono(1, pow(Expr::coord(0), n));
    for (double q : {2.0, 3.0}) {
      for (double x : {1.0, 2.0}) {
        double qn = 1.0;
        for (int i = 0; i < n; ++i) qn *= q;
        double basic = (qn - 1.0) / (q - 1.0);
        double xpow = 1.0;
        for (int i = 0; i < n - 1; ++i) xpow *= x;
        CHECK(jackson_derivative(mono, x, q) == basic * xpow);
      }
    }
  }

  // q -> 1 recovers the classical derivative at first order
  double prev = 0;
  int step = 0;
  for (double q : {1.2, 1.1, 1.05, 1.025}) {
    double err = std::abs(jackson_derivative(sq, 1.0, q) - 2.0);
    CHECK(err <= 2.0 * (q - 1.0));
    if (step++) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }

  try {
    jackson_derivative(sq, 0.0, 2.0);
    FAIL("expected ZeroPoint");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroPoint);
  }
  try {
    jackson_derivative(sq, 1.0, 1.0);
    FAIL("expected DegenerateQ");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateQ);
  }
}

TEST_CASE("deformed braided Leibniz rules") {
  ScalarField id = parse_field("x0", 1);
  CHECK(braided_leibniz_defect_deformed(make_lambda_shift(0.5), id, id, 1.0) == 0.0);

  ScalarField one = parse_field("1", 1);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    ScalarField f = random_polynomial(rng, 1, 4, -2.0, 2.0);
    double x = rng.uniform(0.2, 1.5);
    CHECK(braided_leibniz_defect_deformed(make_lambda_shift(rng.uniform(0.1, 0.8)), f, one, x) ==
          0.0);
  }

  for (int i = 0; i < 200; ++i) {
    ScalarField f = random_polynomial(rng, 1, 4, -2.0, 2.0);
    ScalarField g = random_polynomial(rng, 1, 4, -2.0, 2.0);
    double x = rng.uniform(0.2, 1.5) * (rng.coin() ? 1.0 : -1.0);
    DeformationParam d = rng.coin()
                             ? make_lambda_shift(rng.uniform(0.05, 0.8))
                             : make_jackson(rng.uniform(1.05, 2.0));
    CHECK(std::abs(braided_leibniz_defect_deformed(d, f, g, x)) <= 1e-10);
  }

  CHECK_THROWS_AS(make_lambda_shift(0.0), Error);
  CHECK_THROWS_AS(make_jackson(1.0), Error);
  CHECK_THROWS_AS(make_jackson(-0.5), Error);
}

TEST_CASE("generator families and their basis elements") {
  double lambda = 0.7;
  CFamily c = CFamily::exponential(lambda);

  // p1 = (exp(lambda p) - 1) / lambda
  ScalarField p1 = c_family_basis(c, 1);
  for (double p : {-1.0, 0.0, 0.4, 2.0}) {
    double expected = (std::exp(lambda * p) - 1.0) / lambda;
    CHECK(eval(p1, vec1(p)) == doctest::Approx(expected).epsilon(1e-14));
  }

  // p2 = exp(lambda p) - 1
  ScalarField p2 = c_family_basis(c, 2);
  for (double p : {-1.0, 0.3, 1.0}) {
    CHECK(eval(p2, vec1(p)) == doctest::Approx(std::exp(lambda * p) - 1.0).epsilon(1e-14));
  }

  // classical generator: p1 = p
  ScalarField classical_p1 = c_family_basis(CFamily::classical(), 1);
  for (double p : {-2.0, 0.0, 0.6}) CHECK(eval(classical_p1, vec1(p)) == p);

  CHECK_THROWS_AS(c_family_basis(c, 0), Error);
}

TEST_CASE("annihilator membership") {
  double lambda = 0.3;
  // p(p - lambda) vanishes at 0 and at the shifted point
  ScalarField both(1, Expr::coord(0) * (Expr::coord(0) - Expr::constant(lambda)));
  CHECK(annihilator_member(both, lambda, 1e-12));

  ScalarField id = parse_field("x0", 1);
  CHECK_FALSE(annihilator_member(id, lambda, 1e-12));

  ScalarField sq = parse_field("x0^2", 1);
  CHECK_FALSE(annihilator_member(sq, lambda, 1e-12));  // D_lambda at 0 is lambda
}

TEST_CASE("the shift derivative is a secant pairing, bit for bit") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    ScalarField f = random_polynomial(rng, 1, 4, -2.0, 2.0);
    double x = rng.uniform(-1.0, 1.0);
    double lambda = rng.uniform(0.05, 0.9);
    GroupoidElement g = make_secant(vec1(x + lambda), vec1(x), lambda);
    CHECK(lambda_derivative(f, x, lambda) == pair(g, f));
  }
}
