#include "twistor/core.hpp"

#include <doctest.h>

#include <random>

using namespace twistor;

namespace {

using C = std::complex<double>;
using Qd = Quaternion<double>;

bool near(const S4Pointd& a, const S4Pointd& b, double tol = 1e-12) { return distance(a, b) < tol; }

CP3Pointd random_cp3(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return CP3Pointd(C(n(rng), n(rng)), C(n(rng), n(rng)), C(n(rng), n(rng)), C(n(rng), n(rng)));
}

S4PointQ qpt(int a, int b, int c, int d) { return S4PointQ(a, b, c, d); }

}  // namespace

TEST_CASE("quaternion algebra") {
  CHECK(Qd::i() * Qd::j() == Qd::k());
  CHECK(Qd::j() * Qd::i() == Qd{0, 0, 0, -1});
  CHECK(Qd::k() * Qd::k() == Qd{-1, 0, 0, 0});
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    const Qd p{n(rng), n(rng), n(rng), n(rng)}, q{n(rng), n(rng), n(rng), n(rng)}, r{n(rng), n(rng), n(rng), n(rng)};
    const Qd a = (p * q) * r, b = p * (q * r);
    CHECK((a - b).norm2() < 1e-20);
    CHECK(std::sqrt((p * q).norm2()) == doctest::Approx(std::sqrt(p.norm2()) * std::sqrt(q.norm2())));
  }
  CHECK_THROWS_AS(Qd{}.inverse(), std::domain_error);
}

TEST_CASE("CP3 points") {
  CHECK_THROWS_AS(CP3Pointd(0, 0, 0, 0), std::invalid_argument);
  const CP3Pointd p(1, C(0, 2), 3, 4);
  const C s(0.3, -1.7);
  CHECK(p.equivalent(CP3Pointd(s * 1.0, s * C(0, 2), s * 3.0, s * 4.0)));
  CHECK_FALSE(p.equivalent(CP3Pointd(1, 2, 3, 4)));
}

TEST_CASE("twistor projection examples") {
  CHECK(twistor_project(CP3Pointd(1, 0, 0, 0)).is_infinity());
  CHECK(near(twistor_project(CP3Pointd(0, 0, 1, 0)), S4Pointd(0, 0, 0, 0)));
  CHECK(near(twistor_project(CP3Pointd(1, 0, 1, 0)), S4Pointd(1, 0, 0, 0)));
  // constant on complex scale classes
  const CP3Pointd p(C(1, 2), C(-1, 0.5), C(0.3, 0), C(2, -1));
  const C s(-0.4, 2.2);
  const CP3Pointd ps(s * p[0], s * p[1], s * p[2], s * p[3]);
  CHECK(near(twistor_project(p), twistor_project(ps), 1e-12));
}

TEST_CASE("real structure tau") {
  CHECK(tau(CP3Pointd(1, 0, 0, 0)).equivalent(CP3Pointd(0, 1, 0, 0)));
  CHECK(tau(CP3Pointd(0, 0, 1, 0)).equivalent(CP3Pointd(0, 0, 0, 1)));
  const CP3PointQ p(QiSqrt3(1), QiSqrt3(QSqrt3(0), QSqrt3(2)), QiSqrt3(3), QiSqrt3(4));
  CHECK(tau(tau(p)).equivalent(p));
  CHECK_FALSE(tau(p).equivalent(p));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const CP3Pointd q = random_cp3(rng);
    const S4Pointd a = twistor_project(q), b = twistor_project(tau(q));
    // relative comparison: random points can project far out
    const double scale = a.is_infinity() ? 1.0 : 1.0 + a.coords().norm();
    CHECK(distance(a, b) < 1e-9 * scale * scale);
    CHECK(projective_distance(q, tau(q)) > 0);
  }
}

TEST_CASE("fibre map") {
  const auto f0 = fiber_map<C>(S4Pointd(0, 0, 0, 0));
  const auto z = f0(C(2, 3));
  CHECK(z[0] == C(0));
  CHECK(z[1] == C(0));
  CHECK(z[2] == C(2, 3));
  CHECK(z[3] == C(1));

  const auto f1 = fiber_map<C>(S4Pointd(1, 0, 0, 0));
  const auto w = f1(C(5, 2));
  CHECK(w[0] == C(5, 2));
  CHECK(w[1] == C(1));
  CHECK(w[2] == C(5, 2));
  CHECK(w[3] == C(1));
  CHECK(near(twistor_project(CP3Pointd(w)), S4Pointd(1, 0, 0, 0)));

  CHECK_THROWS_AS(fiber_map<C>(S4Pointd::infinity()), InfinityFiberError);
  CHECK(twistor_project(CP3Pointd(infinity_fiber<C>()(C(0.5, 1)))).is_infinity());

  // every point of every fibre projects to its base, exactly
  const S4PointQ x(QSqrt3(Rational(1, 2)), QSqrt3(Rational(0), Rational(1, 2)), -2, 3);
  const auto fx = fiber_map<QiSqrt3>(x);
  for (int k = -2; k <= 2; ++k) {
    const QiSqrt3 lam(QSqrt3(k), QSqrt3(Rational(1, 3)));
    const auto v = fx(lam);
    bool nonzero = false;
    for (int i = 0; i < 4; ++i) nonzero = nonzero || !v[i].is_zero();
    CHECK(nonzero);  // never the zero quadruple
    CHECK(twistor_project(CP3PointQ(v)) == x);
  }
}

TEST_CASE("conformal generators") {
  CHECK(apply_generator(Generator::Iota, qpt(1, 0, 0, 0)) == qpt(1, 0, 0, 0));
  CHECK(apply_generator(Generator::Sigma, qpt(1, 2, 3, 4)) == qpt(1, 2, -3, -4));
  CHECK(apply_generator(Generator::Iota, apply_generator(Generator::Iota, qpt(1, 2, 3, 4))) == qpt(1, 2, 3, 4));
  CHECK(apply_generator(Generator::Iota, qpt(0, 0, 0, 0)).is_infinity());
  CHECK(apply_generator(Generator::Iota, S4PointQ::infinity()) == qpt(0, 0, 0, 0));
  CHECK(apply_generator(Generator::Theta, S4PointQ::infinity()).is_infinity());
  CHECK(apply_generator(Generator::Sigma, S4PointQ::infinity()).is_infinity());
  CHECK_FALSE(apply_generator(Generator::Theta, qpt(1, 2, 3, 4)).is_infinity());

  const ConformalMap empty;
  CHECK(empty(qpt(1, 2, 3, 4)) == qpt(1, 2, 3, 4));
}

TEST_CASE("the symmetry group") {
  const auto G = enumerate_group();
  CHECK(G.size() == 12);

  const auto same = [](const ConformalMap& a, const ConformalMap& b) {
    for (const auto& p : group_sample_points()) {
      if (!(a(p) == b(p))) return false;
    }
    return true;
  };
  CHECK(same(ConformalMap::parse("ttt"), ConformalMap()));
  CHECK(same(ConformalMap::parse("si"), ConformalMap::parse("is")));
  // both give (x1, -x2, x3, x4) / |x|^2
  const S4PointQ p = qpt(1, 2, 3, 4);
  const QSqrt3 n(30);
  CHECK(ConformalMap::parse("si")(p) == S4PointQ(QSqrt3(1) / n, QSqrt3(-2) / n, QSqrt3(3) / n, QSqrt3(4) / n));

  for (const auto& a : G) {
    for (const auto& b : G) CHECK(find_in_group(G, a.followed_by(b)) >= 0);
  }
}
