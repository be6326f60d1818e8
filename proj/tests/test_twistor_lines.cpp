#include "twistor/io.hpp"
#include "twistor/twistor_lines.hpp"

#include <doctest.h>

#include <algorithm>

using namespace twistor;

namespace {

using C = std::complex<double>;

const QSqrt3 kHalf(Rational(1, 2));
const QSqrt3 kHalfSqrt3(Rational(0), Rational(1, 2));

std::vector<S4PointQ> flagship_expected() {
  return {S4PointQ::infinity(), S4PointQ(0, 0, 0, 0), S4PointQ(-1, 0, 0, 0), S4PointQ(kHalf, kHalfSqrt3, 0, 0),
          S4PointQ(kHalf, -kHalfSqrt3, 0, 0)};
}

std::vector<S4PointQ> certified(const TwistorFiberSet& s) {
  std::vector<S4PointQ> out;
  for (const auto& f : s.fibers) {
    if (f.certified) out.push_back(*f.exact);
  }
  return out;
}

bool same_set(const std::vector<S4PointQ>& a, const std::vector<S4PointQ>& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const S4PointQ& p) { return std::count(b.begin(), b.end(), p) == 1; });
}

ExtComplex ext(C z) { return {z, false}; }

}  // namespace

TEST_CASE("flagship twistor fibres") {
  const auto found = certified(find_twistor_fibers(transformed_fermat_cubic()));
  CHECK(same_set(found, flagship_expected()));

  // Oracle: fibres over q = x1 + i x2 in the x3 = x4 = 0 plane need
  // q^2 + conj(q) = 0 and q + conj(q)^2 = 0: q = 0 or q^3 = -1.
  for (const auto& p : found) {
    if (p.is_infinity()) continue;
    const C qv(p[0].to_double(), p[1].to_double());
    CHECK(std::abs(qv * qv + std::conj(qv)) < 1e-14);
    CHECK(p[2].is_zero());
    CHECK(p[3].is_zero());
  }

  // The set is mapped to itself by theta and iota.
  for (Generator g : {Generator::Theta, Generator::Iota}) {
    std::vector<S4PointQ> image;
    for (const auto& p : found) image.push_back(apply_generator(g, p));
    CHECK(same_set(image, found));
  }
}

TEST_CASE("certified fibres lie in the surface exactly, tau included") {
  const Surface E = transformed_fermat_cubic();
  for (const auto& p : flagship_expected()) {
    CHECK(fiber_contained_exact(E, p));
    if (p.is_infinity()) continue;
    // tau(theta_x(lambda)) lies on the same line, and in the surface
    const auto fx = fiber_map<QiSqrt3>(p);
    for (int k = -1; k <= 2; ++k) {
      const CP3PointQ z(fx(QiSqrt3(QSqrt3(k), QSqrt3(1))));
      const CP3PointQ tz = tau(z);
      CHECK(twistor_project(tz) == p);
      const auto& v = tz.coords();
      const std::vector<QiSqrt3> pt{v[0], v[1], v[2], v[3]};
      CHECK(E.poly().evaluate<QiSqrt3>(pt, [](const GaussRational& c) { return to_qisqrt3(c); }).is_zero());
    }
  }
  CHECK_FALSE(fiber_contained_exact(E, S4PointQ(1, 0, 0, 0)));
}

TEST_CASE("Fermat cubic has three twistor fibres") {
  const auto s = find_twistor_fibers(fermat_cubic());
  CHECK(s.certified_count() == 3);
  CHECK(s.certified_count() <= 5);
}

TEST_CASE("generic cubic has no certified fibres") {
  const Surface f = load_surface("z1^3 + 2 z2^3 - 3 z3^3 + 5 z4^3 + (1/3) z1 z2 z3 - (2/7) z2 z3 z4 + i z1 z4^2");
  CHECK(find_twistor_fibers(f).certified_count() == 0);
}

TEST_CASE("singular surface is rejected") {
  CHECK_THROWS_AS(find_twistor_fibers(load_surface("z3^3 + z4^3")), std::invalid_argument);
  CHECK(find_singular_point(load_surface("z3^3 + z4^3"), 16, 1).has_value());
  CHECK_FALSE(find_singular_point(fermat_cubic(), 32, 1).has_value());
}

TEST_CASE("coplanarity and cosphericity") {
  std::vector<S4Pointd> flag;
  for (const auto& p : flagship_expected()) flag.push_back(to_double(p));
  CHECK(fiber_images_coplanar_or_cospherical(flag));

  const std::vector<S4Pointd> spanning{S4Pointd(0, 0, 0, 0), S4Pointd(1, 0, 0, 0), S4Pointd(0, 1, 0, 0),
                                       S4Pointd(0, 0, 1, 0), S4Pointd(0, 0, 0, 1)};
  CHECK_FALSE(fiber_images_coplanar_or_cospherical(spanning));
  CHECK(fiber_images_coplanar_or_cospherical({S4Pointd(3, 1, 4, 1), S4Pointd(-5, 9, 2, 6), S4Pointd(5, 3, 5, 8)}));

  // Five points of a round 2-sphere in a 3-space.
  const std::vector<S4Pointd> sphere{S4Pointd(1, 0, 0, 0), S4Pointd(0, 1, 0, 0), S4Pointd(0, 0, 1, 0),
                                     S4Pointd(-1, 0, 0, 0), S4Pointd(0.6, 0, 0.8, 0)};
  CHECK(fiber_images_coplanar_or_cospherical(sphere));
}

TEST_CASE("concircularity by cross-ratio") {
  const C w = std::polar(1.0, 2 * M_PI / 3);
  CHECK(concircular(ext(0), ext(1), ext(-1), ExtComplex::infinity()));
  CHECK(std::abs(cross_ratio(ext(0), ext(1), ext(-1), ExtComplex::infinity()) - C(0.5)) < 1e-15);
  CHECK_FALSE(concircular(ext(0), ext(1), ext(w), ExtComplex::infinity()));
  const C cr = cross_ratio(ext(0), ext(1), ext(w), ExtComplex::infinity());
  CHECK(std::abs(cr - C(0.5, -1 / (2 * std::sqrt(3.0)))) < 1e-12);
  CHECK_FALSE(concircular(ext(0), ext(1), ext(w), ext(w * w)));

  // No four of 0, 1, w, w^2, inf are concircular.
  const std::vector<ExtComplex> five{ext(0), ext(1), ext(w), ext(w * w), ExtComplex::infinity()};
  for (int skip = 0; skip < 5; ++skip) {
    std::vector<ExtComplex> four;
    for (int k = 0; k < 5; ++k) {
      if (k != skip) four.push_back(five[k]);
    }
    CHECK_FALSE(concircular(four[0], four[1], four[2], four[3]));
  }
  CHECK_THROWS(concircular(ext(1), ext(1), ext(2), ext(3)));
}

TEST_CASE("projective equivalence with the Fermat cubic") {
  ExactMatrix4 id = ExactMatrix4::Identity();
  const auto vid = verify_fermat_equivalence(id);
  CHECK_FALSE(vid.equivalent);
  CHECK_FALSE(vid.singular);

  const auto printed = verify_fermat_equivalence(printed_fermat_matrix());
  CHECK(determinant(printed_fermat_matrix()).is_zero());
  CHECK(printed.singular);
  CHECK_FALSE(printed.equivalent);

  const auto fixed = verify_fermat_equivalence(corrected_fermat_matrix());
  CHECK(fixed.equivalent);
  REQUIRE(fixed.scale);
  CHECK_FALSE(fixed.scale->is_zero());
  CHECK_FALSE(determinant(corrected_fermat_matrix()).is_zero());

  // constants: b = conj(a), c = i / sqrt3
  const auto k = fermat_constants();
  CHECK(k.b == k.a.conj());
  CHECK(k.c * QiSqrt3(QSqrt3::sqrt3()) == QiSqrt3::i());

  const auto fixes = search_fermat_typo_fixes();
  CHECK_FALSE(fixes.empty());
  for (const auto& f : fixes) CHECK(verify_fermat_equivalence(f.matrix).equivalent);
}
