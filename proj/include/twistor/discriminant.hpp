#pragma once

// The discriminant pipeline: restrict a cubic surface to the twistor fibres,
// take the discriminant of the resulting cubic in the fibre parameter, and
// split it into the two real polynomials cutting out the branch locus.

#include "twistor/multipoly.hpp"

#include <array>
#include <optional>
#include <string>

namespace twistor {

/// Which affine chart of S^4 the fibre parameterization is written in.
/// Inverted uses y = iota(x), i.e. the quaternion inverse, so that the fibre
/// over infinity sits at y = 0.
enum class Chart { Standard, Inverted };

std::string chart_name(Chart chart);

/// Homogeneous defining polynomial of a surface in CP^3, variables z1..z4.
class Surface {
 public:
  explicit Surface(GaussPoly f);

  static Surface from_integer(const IntPoly& f);

  const GaussPoly& poly() const { return f_; }
  int degree() const { return f_.total_degree(); }

 private:
  GaussPoly f_;
};

/// z1 z4^2 + z4 z1^2 + z2 z3^2 + z3 z2^2.
Surface transformed_fermat_cubic();
/// z1^3 + z2^3 + z3^3 + z4^3.
Surface fermat_cubic();

/// f_x(lambda) = c[3] lambda^3 + c[2] lambda^2 + c[1] lambda + c[0], each c[k]
/// a polynomial in x1..x4.
struct FiberCubic {
  std::array<GaussPoly, 4> c;
};

/// Variables (x1, x2, x3, x4, lam) used for the symbolic fibre map.
std::vector<std::string> fiber_map_vars();

/// The components of theta_x(lambda) = lambda p1(x) + p2(x) as polynomials in
/// (x1..x4, lam). In the inverted chart the quaternion pair is swapped,
/// which puts the fibre over infinity at x = 0.
std::array<GaussPoly, 4> symbolic_fiber_map(Chart chart = Chart::Standard);

/// Expands f(maps(x, lambda)) and collects powers of lambda. Rejects
/// surfaces that are not cubic.
FiberCubic substitute_affine(const Surface& f, const std::array<GaussPoly, 4>& maps);

FiberCubic fiber_cubic(const Surface& f, Chart chart = Chart::Standard);

/// Discriminant of a lambda^3 + b lambda^2 + c lambda + d:
/// 18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2.
template <typename T>
T cubic_discriminant(const T& a, const T& b, const T& c, const T& d) {
  T ab = a * b;
  T cd = c * d;
  T bb = b * b;
  T cc = c * c;
  T t1 = ab * cd;
  T t2 = bb * b * d;
  T t3 = bb * cc;
  T t4 = a * cc * c;
  T t5 = a * a * d * d;
  return T(18) * t1 - T(4) * t2 + t3 - T(4) * t4 - T(27) * t5;
}

/// MultiPoly specialization: the ring constants need the variable list.
template <typename C>
MultiPoly<C> cubic_discriminant(const MultiPoly<C>& a, const MultiPoly<C>& b, const MultiPoly<C>& c,
                                const MultiPoly<C>& d) {
  MultiPoly<C> ab = a * b;
  MultiPoly<C> bb = b * b;
  MultiPoly<C> cc = c * c;
  MultiPoly<C> out = (ab * (c * d)) * C(18);
  out -= (bb * b * d) * C(4);
  out += bb * cc;
  out -= (a * cc * c) * C(4);
  out -= (a * a * d * d) * C(27);
  return out;
}

/// Real and imaginary parts of the fibre discriminant, as integer
/// polynomials in x1..x4. Their common zero set is the discriminant locus.
struct LocusPolys {
  IntPoly P;
  IntPoly Q;
};

/// Complex discriminant Delta(x) of the fibre cubic in the given chart.
GaussPoly fiber_discriminant(const Surface& f, Chart chart = Chart::Standard);

/// Requires Gaussian-integer results; throws std::domain_error otherwise.
LocusPolys discriminant_locus_polys(const Surface& f);

/// Splits a Gaussian-integer polynomial into real and imaginary parts.
LocusPolys split_real_imag(const GaussPoly& delta);

/// |x|^(2m) * P(iota(x)) with iota(x) = (x1, -x2, -x3, -x4) / |x|^2 and
/// m = degree_bound (default: total degree of P). Requires m >= deg P and
/// four variables.
IntPoly invert_chart(const IntPoly& p, std::optional<int> degree_bound = std::nullopt);

}  // namespace twistor
