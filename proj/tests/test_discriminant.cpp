#include "twistor/core.hpp"
#include "twistor/discriminant.hpp"
#include "twistor/io.hpp"
#include "twistor/twistor_lines.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace twistor;

namespace {

using C = std::complex<double>;

QiSqrt3 q(const Rational& r) { return QiSqrt3(QSqrt3(r)); }

Rational frac(int n, int d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// f(theta_x(lambda)) by direct substitution, without the symbolic pipeline.
QiSqrt3 restricted(const Surface& f, const S4PointQ& x, const QiSqrt3& lambda) {
  const auto z = fiber_map<QiSqrt3>(x)(lambda);
  const std::vector<QiSqrt3> pt{z[0], z[1], z[2], z[3]};
  return f.poly().evaluate<QiSqrt3>(pt, [](const GaussRational& c) { return to_qisqrt3(c); });
}

// c3..c0 of f_x recovered from four values of the restriction.
std::array<QiSqrt3, 4> interpolated_coefficients(const Surface& f, const S4PointQ& x) {
  const QiSqrt3 f0 = restricted(f, x, 0), f1 = restricted(f, x, 1), fm = restricted(f, x, -1),
                f2 = restricted(f, x, 2);
  const QiSqrt3 c0 = f0;
  const QiSqrt3 c2 = (f1 + fm) * q(Rational(1, 2)) - c0;
  const QiSqrt3 A = (f1 - fm) * q(Rational(1, 2));  // c3 + c1
  const QiSqrt3 B = f2 - q(4) * c2 - c0;            // 8 c3 + 2 c1
  const QiSqrt3 c3 = (B - q(2) * A) * q(Rational(1, 6));
  return {c0, A - c3, c2, c3};
}

std::vector<QiSqrt3> exact_point(const S4PointQ& x) {
  const auto& v = x.coords();
  return {QiSqrt3(v[0]), QiSqrt3(v[1]), QiSqrt3(v[2]), QiSqrt3(v[3])};
}

QiSqrt3 eval_c(const GaussPoly& c, const S4PointQ& x) {
  return c.evaluate<QiSqrt3>(exact_point(x), [](const GaussRational& g) { return to_qisqrt3(g); });
}

QSqrt3 eval_int(const IntPoly& p, const S4PointQ& x) {
  const auto& v = x.coords();
  const std::vector<QSqrt3> pt{v[0], v[1], v[2], v[3]};
  return p.evaluate<QSqrt3>(pt, [](const Integer& c) { return QSqrt3(Rational(c)); });
}

// Degree in s of s -> g(s v), from finite differences of exact samples.
int degree_along(const std::function<Rational(const Rational&)>& g, int max_degree) {
  std::vector<Rational> d;
  for (int s = 0; s <= max_degree + 1; ++s) d.push_back(g(Rational(s)));
  int degree = -1;
  for (int k = 0; k <= max_degree + 1 && !d.empty(); ++k) {
    if (std::any_of(d.begin(), d.end(), [](const Rational& r) { return sgn(r) != 0; })) degree = k;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
    d.pop_back();
  }
  return degree;
}

}  // namespace

TEST_CASE("cubic discriminant: scalar examples") {
  CHECK(cubic_discriminant(Integer(1), Integer(0), Integer(0), Integer(-1)) == -27);
  CHECK(cubic_discriminant(Integer(1), Integer(0), Integer(-3), Integer(2)) == 0);
  CHECK(cubic_discriminant(Integer(0), Integer(2), Integer(2), Integer(0)) == 16);
}

TEST_CASE("cubic discriminant vanishes identically below degree 2") {
  const std::vector<std::string> v{"a", "b", "c", "d"};
  const IntPoly zero(v);
  CHECK(cubic_discriminant(zero, zero, IntPoly::variable(v, 2), IntPoly::variable(v, 3)).is_zero());
  // and not when only a vanishes
  CHECK_FALSE(cubic_discriminant(zero, IntPoly::variable(v, 1), IntPoly::variable(v, 2), IntPoly::variable(v, 3)).is_zero());
}

TEST_CASE("cubic discriminant matches root products for random integer cubics") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-9, 9);
  double worst = 0;
  int n = 0;
  while (n < 500) {
    const int a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
    if (a == 0) continue;
    const Integer exact = cubic_discriminant(Integer(a), Integer(b), Integer(c), Integer(d));
    if (exact == 0) continue;  // a repeated root: relative error undefined
    Eigen::Matrix3d comp;
    comp << -double(b) / a, -double(c) / a, -double(d) / a, 1, 0, 0, 0, 1, 0;
    const Eigen::Vector3cd r = comp.eigenvalues();
    const C prod = (r[0] - r[1]) * (r[0] - r[2]) * (r[1] - r[2]);
    const C oracle = std::pow(double(a), 4) * prod * prod;
    const C formula = cubic_discriminant(C(a), C(b), C(c), C(d));
    worst = std::max(worst, std::abs(formula - oracle) / std::abs(oracle));
    ++n;
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("fibre cubic examples") {
  const Surface E = transformed_fermat_cubic();
  const FiberCubic fc = fiber_cubic(E);
  const std::vector<GaussRational> origin{0, 0, 0, 0}, e1{1, 0, 0, 0};
  for (const auto& c : fc.c) CHECK(c.evaluate(origin).is_zero());
  CHECK(fc.c[3].evaluate(e1) == GaussRational(0));
  CHECK(fc.c[2].evaluate(e1) == GaussRational(2));
  CHECK(fc.c[1].evaluate(e1) == GaussRational(2));
  CHECK(fc.c[0].evaluate(e1) == GaussRational(0));
  for (const auto& c : fc.c) CHECK(c.total_degree() <= 3);

  // z3^3: the z3 component of theta_x is lambda
  const FiberCubic z3 = fiber_cubic(load_surface("z3^3"));
  CHECK(z3.c[3].num_terms() == 1);
  CHECK(z3.c[3].evaluate(e1) == GaussRational(1));
  CHECK(z3.c[2].is_zero());
  CHECK(z3.c[1].is_zero());
  CHECK(z3.c[0].is_zero());

  CHECK_THROWS(fiber_cubic(load_surface("z1^2 z2^2")));
}

TEST_CASE("fibre cubic agrees with direct substitution at random rational points") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  for (const Surface& f : {transformed_fermat_cubic(), fermat_cubic()}) {
    const FiberCubic fc = fiber_cubic(f);
    for (int trial = 0; trial < 100; ++trial) {
      const S4PointQ x(QSqrt3(frac(num(rng), den(rng))), QSqrt3(frac(num(rng), den(rng))),
                       QSqrt3(frac(num(rng), den(rng))), QSqrt3(frac(num(rng), den(rng))));
      const auto oracle = interpolated_coefficients(f, x);
      for (int k = 0; k < 4; ++k) CHECK(eval_c(fc.c[k], x) == oracle[k]);
    }
  }
}

TEST_CASE("flagship locus polynomials") {
  const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  const std::vector<Integer> e1{1, 0, 0, 0}, zero{0, 0, 0, 0};
  CHECK(lp.P.evaluate(e1) == 16);
  CHECK(lp.Q.evaluate(e1) == 0);
  CHECK(lp.P.evaluate(zero) == 0);
  CHECK(lp.Q.evaluate(zero) == 0);
  CHECK(lp.P.total_degree() <= 12);
  CHECK(lp.Q.total_degree() <= 12);

  // Both vanish at the five fibre images (infinity through the inverted chart).
  for (const auto& fb : find_twistor_fibers(transformed_fermat_cubic()).fibers) {
    REQUIRE(fb.exact);
    if (fb.exact->is_infinity()) {
      const S4PointQ o(0, 0, 0, 0);
      CHECK(eval_int(invert_chart(lp.P, 12), o).is_zero());
      CHECK(eval_int(invert_chart(lp.Q, 12), o).is_zero());
    } else {
      CHECK(eval_int(lp.P, *fb.exact).is_zero());
      CHECK(eval_int(lp.Q, *fb.exact).is_zero());
    }
  }
}

TEST_CASE("flagship locus degree agrees with an independent ray oracle") {
  // Along a generic ray s -> s v, Re Delta(s v) from direct substitution has
  // the same degree in s as P (generic v sees the top homogeneous part).
  const Surface E = transformed_fermat_cubic();
  const LocusPolys lp = discriminant_locus_polys(E);
  const Rational v[4] = {Rational(3, 2), Rational(-1, 3), Rational(5, 7), Rational(2)};
  auto ray = [&](const Rational& s) { return S4PointQ(QSqrt3(s * v[0]), QSqrt3(s * v[1]), QSqrt3(s * v[2]), QSqrt3(s * v[3])); };
  auto delta = [&](const Rational& s) {
    const auto c = interpolated_coefficients(E, ray(s));
    return cubic_discriminant(c[3], c[2], c[1], c[0]);
  };
  const int re_deg = degree_along([&](const Rational& s) { return delta(s).real().rational_part(); }, 14);
  const int im_deg = degree_along([&](const Rational& s) { return delta(s).imag().rational_part(); }, 14);
  CHECK(re_deg == lp.P.total_degree());
  CHECK(im_deg == lp.Q.total_degree());
  // sqrt3 never enters a rational point
  CHECK(delta(Rational(3)).real().sqrt3_part() == 0);
}

TEST_CASE("locus polynomials are the real and imaginary parts of Delta") {
  const GaussPoly d = fiber_discriminant(transformed_fermat_cubic());
  const LocusPolys lp = split_real_imag(d);
  const GaussRational i = GaussRational::i();
  auto lift = [](const IntPoly& p) {
    return p.map_coefficients<GaussRational>([](const Integer& c) { return GaussRational(Rational(c)); });
  };
  CHECK((lift(lp.P) + lift(lp.Q) * i - d).is_zero());
}

TEST_CASE("invert_chart") {
  const auto X = default_vars(4, "x");
  const IntPoly one = IntPoly::constant(X, Integer(1));
  IntPoly r2(X);
  for (int k = 0; k < 4; ++k) r2 += IntPoly::variable(X, k) * IntPoly::variable(X, k);
  IntPoly r24 = IntPoly::constant(X, Integer(1));
  for (int k = 0; k < 12; ++k) r24 *= r2;
  CHECK((invert_chart(one, 12) - r24).is_zero());
  CHECK((invert_chart(IntPoly::variable(X, 0)) - IntPoly::variable(X, 0)).is_zero());
  CHECK((invert_chart(IntPoly::variable(X, 1)) + IntPoly::variable(X, 1)).is_zero());
  CHECK_THROWS(invert_chart(r2, 1));

  // Zero sets correspond: sample y near 0 on {P~ = 0} is hard, so check the
  // identity P~(y) = |y|^(2m) P(iota y) at rational points instead.
  const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  const IntPoly Pt = invert_chart(lp.P);
  const int m = lp.P.total_degree();
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> y{frac(num(rng), den(rng)), frac(num(rng), den(rng)), frac(num(rng), den(rng)),
                            frac(num(rng), den(rng))};
    const Rational n2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
    if (sgn(n2) == 0) continue;
    const std::vector<Rational> iy{y[0] / n2, -y[1] / n2, -y[2] / n2, -y[3] / n2};
    auto lift = [](const Integer& c) { return Rational(c); };
    Rational scale = 1;
    for (int k = 0; k < m; ++k) scale *= n2;
    CHECK(Pt.evaluate<Rational>(y, lift) == scale * lp.P.evaluate<Rational>(iy, lift));
  }
}

TEST_CASE("degenerate surface z3^3 gives an identically zero locus") {
  const LocusPolys lp = discriminant_locus_polys(load_surface("z3^3"));
  CHECK(lp.P.is_zero());
  CHECK(lp.Q.is_zero());
}
