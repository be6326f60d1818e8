#include "twistor/io.hpp"
#include "twistor/multipoly.hpp"

#include <doctest.h>

#include <random>

using namespace twistor;

namespace {

const auto X = default_vars(4, "x");

IntPoly ix(int k) { return IntPoly::variable(X, k); }
IntPoly ic(int c) { return IntPoly::constant(X, Integer(c)); }

// Random small polynomial with a few terms of degree <= 3.
IntPoly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> e(0, 2), c(-5, 5), n(1, 5);
  IntPoly p(X);
  for (int k = n(rng); k > 0; --k) {
    int v = c(rng);
    if (v) p += IntPoly::monomial(X, {e(rng), e(rng), e(rng), e(rng)}, Integer(v));
  }
  return p;
}

}  // namespace

TEST_CASE("Q(sqrt3) and Q(i, sqrt3) arithmetic") {
  const QSqrt3 s = QSqrt3::sqrt3();
  CHECK(s * s == QSqrt3(3));
  const QiSqrt3 i = QiSqrt3::i();
  CHECK(i * i == QiSqrt3(-1));
  const QSqrt3 a(Rational(1, 2), Rational(-3, 7));
  CHECK(a * a.inverse() == QSqrt3(1));
  CHECK((a + s) - s == a);
  CHECK(QSqrt3(Rational(0), Rational(1)).sign() == 1);
  CHECK(QSqrt3(Rational(-2), Rational(1)).sign() == -1);  // sqrt3 < 2
  CHECK(QSqrt3(Rational(7), Rational(-4)).sign() == 1);   // 7 > 4 sqrt3
  const QiSqrt3 z(a, QSqrt3(Rational(2), Rational(1)));
  CHECK(z * z.inverse() == QiSqrt3(1));
  CHECK((z * z.conj()).is_real());
  // associativity and distributivity on a sample
  const QiSqrt3 w(QSqrt3(Rational(-1, 3)), s);
  CHECK((z * w) * i == z * (w * i));
  CHECK(z * (w + i) == z * w + z * i);
}

TEST_CASE("polynomial arithmetic") {
  CHECK(((ix(0) + ic(1)) * (ix(0) - ic(1))).terms() == (ix(0) * ix(0) - ic(1)).terms());
  const IntPoly p = ix(1) * ix(2) + ic(3);
  CHECK((p + IntPoly(X)).terms() == p.terms());
  CHECK((p - p).is_zero());
  CHECK((p - p).num_terms() == 0);

  const auto G = default_vars(4, "x");
  const GaussPoly x1 = GaussPoly::variable(G, 0), x2 = GaussPoly::variable(G, 1);
  const GaussRational i = GaussRational::i();
  const GaussPoly prod = (x1 + x2 * i) * (x1 - x2 * i);
  CHECK(prod.terms() == (x1 * x1 + x2 * x2).terms());

  CHECK_THROWS_AS(ix(0) + IntPoly::variable(default_vars(3, "y"), 0), std::invalid_argument);
}

TEST_CASE("evaluation") {
  const std::vector<Integer> pt{3, 4, 0, 0};
  CHECK((ix(0) * ix(0) + ix(1) * ix(1)).evaluate(pt) == 25);
  CHECK(ic(7).evaluate(pt) == 7);
  CHECK(ic(7).evaluate(std::vector<Integer>{-1, 9, 2, 5}) == 7);
  CHECK_THROWS(ix(0).evaluate(std::vector<Integer>{1, 2}));
}

TEST_CASE("evaluation is a ring homomorphism on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> v(-6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const IntPoly p = random_poly(rng), q = random_poly(rng);
    const std::vector<Integer> pt{v(rng), v(rng), v(rng), v(rng)};
    CHECK((p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt));
    CHECK((p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt));
  }
}

TEST_CASE("no zero coefficients are stored") {
  IntPoly p = ix(0) + ix(1);
  p -= ix(1);
  for (const auto& [e, c] : p.terms()) CHECK(c != 0);
  CHECK(p.num_terms() == 1);
}

TEST_CASE("polynomial JSON round trip is exact in every ring") {
  std::mt19937_64 rng(3);
  const IntPoly p = random_poly(rng) * random_poly(rng);
  const IntPoly p2 = poly_from_json<Integer>(Json::parse(poly_to_json(p).dump()));
  CHECK(p2.vars() == p.vars());
  CHECK((p2 - p).is_zero());

  const GaussPoly g = parse_polynomial("(1/2 - 3i) z1^2 z4 + 7 z2 z3^2 - i", default_vars(4, "z"));
  const GaussPoly g2 = poly_from_json<GaussRational>(Json::parse(poly_to_json(g).dump()));
  CHECK((g2 - g).is_zero());

  using SPoly = MultiPoly<QiSqrt3>;
  const SPoly s = SPoly::constant(X, QiSqrt3(QSqrt3(Rational(1, 2)), QSqrt3(Rational(0), Rational(1, 6)))) *
                  SPoly::variable(X, 2);
  const Json js = poly_to_json(s);
  CHECK(js["ring"] == "SQRT3_FIELD");
  CHECK(js["terms"][0]["coeff"].size() == 4);
  CHECK((poly_from_json<QiSqrt3>(Json::parse(js.dump())) - s).is_zero());
}

TEST_CASE("polynomial JSON rejects malformed input") {
  Json j = poly_to_json(ix(0) + ic(2));
  Json wrong_ring = j;
  wrong_ring["ring"] = "GAUSS_RAT";
  CHECK_THROWS(poly_from_json<Integer>(wrong_ring));
  Json dup = j;
  dup["terms"].push_back(dup["terms"][0]);
  CHECK_THROWS(poly_from_json<Integer>(dup));
  Json zero = j;
  zero["terms"][0]["coeff"] = "0";
  CHECK_THROWS(poly_from_json<Integer>(zero));
}

TEST_CASE("surface parser") {
  const auto Z = default_vars(4, "z");
  const GaussPoly f = parse_polynomial("z1*z4^2 + z4*z1^2 + z2*z3^2 + z3*z2^2", Z);
  CHECK(f.num_terms() == 4);
  CHECK(f.is_homogeneous());
  CHECK((parse_polynomial("2(z1 + z2)^2", Z) - parse_polynomial("2 z1^2 + 4 z1 z2 + 2 z2^2", Z)).is_zero());
  CHECK_THROWS_AS(parse_polynomial("z1^3 + (z2", Z), std::invalid_argument);
  CHECK_THROWS(parse_polynomial("z5", Z));
  CHECK_THROWS(load_surface("preset:nope"));
  CHECK(load_surface("preset:fermat").degree() == 3);
}
