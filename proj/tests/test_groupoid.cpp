#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "tg/error.hpp"
#include "tg/groupoid.hpp"
#include "tg/rng.hpp"

using namespace tg;

namespace {

GroupoidElement random_composable_partner(Rng& rng, const GroupoidElement& g) {
  // a partner h with range(h) = source(g), built without arithmetic
  if (is_secant(g)) {
    const Secant& s = std::get<Secant>(g);
    Vector w(s.x.size());
    for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
    return make_secant(w, s.x, s.eps);
  }
  const Tangent& t = std::get<Tangent>(g);
  Vector u(t.x.size());
  for (int i = 0; i < u.size(); ++i) u[i] = rng.uniform(-1.0, 1.0);
  return make_tangent(t.x, u);
}

GroupoidElement random_element(Rng& rng, int dim) {
  Vector x(dim), y(dim);
  for (int i = 0; i < dim; ++i) {
    x[i] = rng.uniform(-1.0, 1.0);
    y[i] = rng.uniform(-1.0, 1.0);
  }
  if (rng.coin()) return make_secant(x, y, rng.uniform(0.1, 0.9));
  return make_tangent(x, y);
}

}  // namespace

TEST_CASE("range and source") {
  GroupoidElement s = make_secant(vec1(1.0), vec1(2.0), 0.3);
  CHECK(range(s).point[0] == 2.0);
  CHECK(range(s).eps == 0.3);
  CHECK(source(s).point[0] == 1.0);
  CHECK(source(s).eps == 0.3);

  GroupoidElement t = make_tangent(vec2(0.0, 0.0), vec2(1.0, 1.0));
  CHECK(tgtest::exact_equal(range(t).point, vec2(0.0, 0.0)));
  CHECK(range(t).eps == 0.0);
  CHECK(source(t).eps == 0.0);
}

TEST_CASE("unit embedding") {
  GroupoidElement u0 = unit(vec1(2.0), 0.0);
  CHECK(is_tangent(u0));
  CHECK(as_tangent(u0).v[0] == 0.0);

  GroupoidElement u = unit(vec1(2.0), 0.5);
  CHECK(is_secant(u));
  CHECK(as_secant(u).x[0] == 2.0);
  CHECK(as_secant(u).y[0] == 2.0);
  CHECK(as_secant(u).eps == 0.5);

  CHECK_THROWS_AS(unit(vec1(0.0), 1.0), Error);
  CHECK_THROWS_AS(unit(vec1(0.0), -0.1), Error);

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    ScalarField f = random_polynomial(rng, 1, 4, -2.0, 2.0);
    CHECK(pair(unit(vec1(rng.uniform(-1, 1)), rng.uniform(0.0, 0.99)), f) == 0.0);
  }
}

TEST_CASE("composition telescopes") {
  GroupoidElement a = make_secant(vec1(1.0), vec1(2.0), 0.3);
  GroupoidElement b = make_secant(vec1(0.0), vec1(1.0), 0.3);
  GroupoidElement ab = compose(a, b);
  CHECK(as_secant(ab).x[0] == 0.0);
  CHECK(as_secant(ab).y[0] == 2.0);
  CHECK(as_secant(ab).eps == 0.3);

  GroupoidElement t1 = make_tangent(vec1(0.0), vec1(3.0));
  GroupoidElement t2 = make_tangent(vec1(0.0), vec1(4.0));
  CHECK(as_tangent(compose(t1, t2)).v[0] == 7.0);

  GroupoidElement far = make_secant(vec1(0.0), vec1(5.0), 0.3);
  CHECK_THROWS_AS(compose(a, far), Error);
  try {
    compose(a, far);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotComposable);
  }

  GroupoidElement other_eps = make_secant(vec1(0.0), vec1(1.0), 0.4);
  try {
    compose(a, other_eps);
    FAIL("expected MixedEpsilon");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MixedEpsilon);
  }

  CHECK_THROWS_AS(compose(a, t1), Error);
}

TEST_CASE("inverse flips slots and negates the pairing") {
  GroupoidElement s = make_secant(vec1(1.0), vec1(2.0), 0.3);
  CHECK(as_secant(inverse(s)).x[0] == 2.0);
  CHECK(as_secant(inverse(s)).y[0] == 1.0);

  GroupoidElement t = make_tangent(vec2(0.1, 0.2), vec2(1.0, -2.0));
  CHECK(tgtest::exact_equal(as_tangent(inverse(t)).v, vec2(-1.0, 2.0)));

  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    int dim = rng.uniform_int(1, 2);
    GroupoidElement g = random_element(rng, dim);
    ScalarField f = random_polynomial(rng, dim, 3, -2.0, 2.0);
    CHECK(pair(inverse(g), f) == -pair(g, f));  // exact negation

    // g o g^-1 is the unit at range(g)
    GroupoidElement u = compose(g, inverse(g));
    if (is_secant(u)) {
      CHECK(tgtest::exact_equal(as_secant(u).x, as_secant(u).y));
    } else {
      CHECK(as_tangent(u).v.norm() == 0.0);
    }
  }
}

TEST_CASE("pairing values") {
  ScalarField id = parse_field("x0", 1);
  CHECK(pair(make_secant(vec1(1.0), vec1(0.0), 0.5), id) == 2.0);

  ScalarField lin = parse_field("3.25*x0", 1);
  CHECK(pair(make_tangent(vec1(0.7), vec1(2.0)), lin) == 3.25 * 2.0);

  ScalarField s = parse_field("sin(x0)", 1);
  long double oracle = (std::sin(0.3L) - std::sin(0.1L)) / 0.2L;
  CHECK(std::abs(pair(make_secant(vec1(0.3), vec1(0.1), 0.2), s) -
                 static_cast<double>(oracle)) <= 1e-12);
}

TEST_CASE("pairing is additive along composition") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    int dim = rng.uniform_int(1, 2);
    GroupoidElement g1 = random_element(rng, dim);
    GroupoidElement g2 = random_composable_partner(rng, g1);
    ScalarField f = random_polynomial(rng, dim, 3, -2.0, 2.0);
    double glued = pair(compose(g1, g2), f);
    CHECK(std::abs(glued - (pair(g1, f) + pair(g2, f))) <= 1e-12);
  }
}

TEST_CASE("associativity and unit laws hold bitwise") {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    int dim = rng.uniform_int(1, 2);
    GroupoidElement a = random_element(rng, dim);
    GroupoidElement b = random_composable_partner(rng, a);
    GroupoidElement c = random_composable_partner(rng, b);
    GroupoidElement left = compose(compose(a, b), c);
    GroupoidElement right = compose(a, compose(b, c));
    CHECK(format_element(left) == format_element(right));

    CHECK(format_element(compose(a, unit(source(a)))) == format_element(a));
    CHECK(format_element(compose(unit(range(a)), a)) == format_element(a));
  }
}

TEST_CASE("braided Leibniz rule") {
  ScalarField f = parse_field("x0", 1);
  GroupoidElement g = make_secant(vec1(1.0), vec1(0.0), 0.5);
  CHECK(braided_leibniz_defect(g, f, f) == 0.0);

  GroupoidElement t = make_tangent(vec1(2.0), vec1(1.0));
  CHECK(braided_leibniz_defect(t, f, f) == 0.0);

  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    int dim = rng.uniform_int(1, 2);
    GroupoidElement e = random_element(rng, dim);
    ScalarField a = random_polynomial(rng, dim, 4, -2.0, 2.0);
    ScalarField b = random_polynomial(rng, dim, 4, -2.0, 2.0);
    CHECK(std::abs(braided_leibniz_defect(e, a, b)) <= 1e-10);
  }
}

TEST_CASE("coordinate quotient form") {
  ScalarField sq = parse_field("x0^2", 1);
  CHECK(coordinate_quotient_defect(make_secant(vec1(1.0), vec1(0.0), 0.5), sq) == 0.0);

  ScalarField e = parse_field("exp(x0)", 1);
  CHECK(std::abs(coordinate_quotient_defect(make_secant(vec1(0.7), vec1(0.2), 0.1), e)) <= 1e-12);

  try {
    coordinate_quotient_defect(make_secant(vec1(1.0), vec1(1.0), 0.5), sq);
    FAIL("expected DegenerateSecant");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::DegenerateSecant);
  }
}

TEST_CASE("curve membership") {
  Chart chart = Chart::flat(1);
  Curve line(1, {Expr::coord(0)});
  CHECK(curve_member(line, make_secant(vec1(0.0), vec1(0.5), 0.5), chart, 1e-9));
  CHECK_FALSE(curve_member(line, make_secant(vec1(0.0), vec1(0.4), 0.5), chart, 1e-9));

  Curve ray(2, {Expr::constant(1.5) * Expr::coord(0), Expr::constant(-2.0) * Expr::coord(0)});
  CHECK(curve_member(ray, make_tangent(vec2(0, 0), vec2(1.5, -2.0)), Chart::flat(2), 1e-9));

  Curve parabola(1, {Expr::pow(Expr::coord(0), 2)});
  CHECK_FALSE(curve_member(parabola, make_tangent(vec1(0.0), vec1(1.0)), chart, 1e-6));

  // smooth non-polynomial curve: quotient error is O(eps^2), Richardson handles it
  Curve sine(1, {Expr::sin(Expr::coord(0))});
  CHECK(curve_member(sine, make_tangent(vec1(0.0), vec1(1.0)), chart, 1e-6));
}

TEST_CASE("sequence limits on the geometric schedule") {
  auto schedule = [](int lo, int hi) {
    std::vector<double> eps;
    for (int k = lo; k <= hi; ++k) eps.push_back(std::ldexp(1.0, -k));
    return eps;
  };
  Chart chart = Chart::flat(1);

  SUBCASE("constant quotient converges") {
    std::vector<Secant> terms;
    for (double e : schedule(1, 20)) terms.push_back(Secant{vec1(2 * e), vec1(0.0), e});
    SequenceLimit lim = sequence_limit(SecantSequence(terms), chart, 1e-8);
    REQUIRE(lim.converged());
    CHECK(lim.tangent->v[0] == 2.0);
    CHECK(std::abs(lim.tangent->x[0]) <= 1e-3);
  }

  SUBCASE("square-root endpoints blow up the quotient") {
    std::vector<Secant> terms;
    for (double e : schedule(1, 12)) terms.push_back(Secant{vec1(std::sqrt(e)), vec1(0.0), e});
    SequenceLimit lim = sequence_limit(SecantSequence(terms), chart, 1e-8);
    REQUIRE_FALSE(lim.converged());
    CHECK(*lim.reason == DivergenceReason::QuotientDiverges);
  }

  SUBCASE("symmetric endpoints give the two-sided quotient") {
    std::vector<Secant> terms;
    for (double e : schedule(1, 20)) terms.push_back(Secant{vec1(-e), vec1(e), e});
    SequenceLimit lim = sequence_limit(SecantSequence(terms), chart, 1e-8);
    REQUIRE(lim.converged());
    CHECK(lim.tangent->v[0] == -2.0);
    CHECK(lim.tangent->x[0] == 0.0);
  }

  SUBCASE("alternating quotient oscillates") {
    std::vector<Secant> terms;
    int n = 0;
    for (double e : schedule(1, 20)) {
      terms.push_back(Secant{vec1((n % 2 ? e : -e)), vec1(0.0), e});
      ++n;
    }
    SequenceLimit lim = sequence_limit(SecantSequence(terms), chart, 1e-8);
    REQUIRE_FALSE(lim.converged());
    CHECK(*lim.reason == DivergenceReason::QuotientOscillates);
  }

  SUBCASE("non-merging base points diverge") {
    std::vector<Secant> terms;
    int n = 0;
    for (double e : schedule(1, 12)) {
      double x = (n % 2 ? 0.5 : -0.5);
      terms.push_back(Secant{vec1(x), vec1(x), e});
      ++n;
    }
    SequenceLimit lim = sequence_limit(SecantSequence(terms), chart, 1e-8);
    REQUIRE_FALSE(lim.converged());
    CHECK(*lim.reason == DivergenceReason::BasePointsDiverge);
  }

  SUBCASE("convergence across the circle seam") {
    Chart circle = Chart::circle(1.0);
    std::vector<Secant> terms;
    for (double e : schedule(8, 20))
      terms.push_back(Secant{circle.wrap(vec1(1.0 - e)), vec1(e), e});
    SequenceLimit lim = sequence_limit(SecantSequence(terms), circle, 1e-8);
    REQUIRE(lim.converged());
    CHECK(lim.tangent->v[0] == doctest::Approx(-2.0));
  }

  SUBCASE("preconditions") {
    std::vector<Secant> terms;
    for (double e : schedule(1, 3)) terms.push_back(Secant{vec1(e), vec1(0.0), e});
    CHECK_THROWS_AS(sequence_limit(SecantSequence(terms), chart, 1e-8), Error);
    CHECK_THROWS_AS(
        SecantSequence({Secant{vec1(0.0), vec1(0.0), 0.1}, Secant{vec1(0.0), vec1(0.0), 0.1}}),
        Error);
  }
}

TEST_CASE("boundary consistency: sequence pairings approach the tangent pairing") {
  Chart chart = Chart::flat(1);
  double x = 0.2, v = 1.3, c = 0.6;
  std::vector<Secant> terms;
  for (int k = 4; k <= 30; ++k) {
    double e = std::ldexp(1.0, -k);
    terms.push_back(Secant{vec1(x + e * v + c * e * e), vec1(x), e});
  }
  double tol = 1e-6;
  SequenceLimit lim = sequence_limit(SecantSequence(terms), chart, tol);
  REQUIRE(lim.converged());
  CHECK(std::abs(lim.tangent->v[0] - v) <= tol);

  Rng rng(53);
  for (int i = 0; i < 20; ++i) {
    ScalarField f = random_polynomial(rng, 1, 4, -2.0, 2.0);
    GroupoidElement t = make_tangent(vec1(x), vec1(v));
    GroupoidElement last = terms.back();
    double grad = std::abs(eval(differentiate(f, 0), vec1(x)));
    CHECK(std::abs(pair(last, f) - pair(t, f)) <= 10 * tol * std::max(1.0, grad));
  }
}

TEST_CASE("element line format round-trips") {
  GroupoidElement s = make_secant(vec1(1.0), vec1(0.0), 0.5);
  CHECK(format_element(s) == "S 1 | 0 | 0.5");
  GroupoidElement t = make_tangent(vec2(0.5, -1.25), vec2(3.0, 0.125));
  CHECK(format_element(t) == "T 0.5,-1.25 | 3,0.125");

  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    GroupoidElement g = random_element(rng, rng.uniform_int(1, 3));
    GroupoidElement back = parse_element(format_element(g));
    CHECK(format_element(back) == format_element(g));
    if (is_secant(g)) {
      CHECK(tgtest::exact_equal(as_secant(back).x, as_secant(g).x));
      CHECK(tgtest::exact_equal(as_secant(back).y, as_secant(g).y));
      CHECK(as_secant(back).eps == as_secant(g).eps);
    } else {
      CHECK(tgtest::exact_equal(as_tangent(back).v, as_tangent(g).v));
    }
  }

  CHECK_THROWS_AS(parse_element(""), Error);
  CHECK_THROWS_AS(parse_element("Q 1 | 2"), Error);
  CHECK_THROWS_AS(parse_element("S 1 | 2"), Error);
  CHECK_THROWS_AS(parse_element("S 1 | 2 | 1.5"), Error);  // eps out of (0,1)
  CHECK_THROWS_AS(parse_element("T 1,2 | 3"), Error);
}
