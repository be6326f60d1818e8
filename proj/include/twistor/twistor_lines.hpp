#pragma once

// Twistor fibres contained in a cubic surface, and the checkable
// consequences of the line-count theorems: coplanarity / cosphericity of the
// fibre images, concircularity on the Riemann sphere, and the projective
// equivalence between the transformed and the ordinary Fermat cubic.

#include "twistor/core.hpp"
#include "twistor/discriminant.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twistor {

struct FiberSearchConfig {
  int grid_per_axis = 21;
  double half_width = 2.0;
  double tolerance = 1e-12;
  int max_iterations = 50;
  /// Solutions closer than this (chordal metric on S^4) are one cluster.
  double cluster_radius = 1e-6;
  /// Max |numerator| and denominator of the rational parts when snapping.
  int snap_height = 8;
  double snap_tolerance = 1e-9;
  int smoothness_starts = 64;
  std::uint64_t seed = 1;
};

struct TwistorFiber {
  S4Pointd point;
  bool certified = false;
  std::optional<S4PointQ> exact;
  double residual = 0;
  /// Distance between the numerical cluster and its snapped exact value.
  double snap_error = 0;
};

struct TwistorFiberSet {
  std::vector<TwistorFiber> fibers;
  std::size_t certified_count() const;
  std::vector<S4Pointd> certified_points() const;
};

/// Random-start Newton search for a projective zero of grad f. Returns a
/// witness point (unit norm) if one is found; sampling-based, so absence is
/// evidence of smoothness, not proof.
std::optional<Eigen::Matrix<std::complex<double>, 4, 1>> find_singular_point(const Surface& f, int starts,
                                                                            std::uint64_t seed);

/// True when every coefficient of f restricted to the fibre over x vanishes.
bool fiber_contained_exact(const Surface& f, const S4PointQ& x);

/// Nearest a + b sqrt3 with rational a, b of height <= `height`, if within tol.
std::optional<QSqrt3> snap_to_qsqrt3(double value, int height, double tol);

/// Grid + Gauss-Newton on the eight real equations Re c_k = Im c_k = 0 in
/// both charts, then clustering, snapping and exact certification. Throws
/// std::invalid_argument if the surface is not a cubic or looks singular, and
/// std::logic_error if more than five fibres certify.
TwistorFiberSet find_twistor_fibers(const Surface& f, const FiberSearchConfig& cfg = {});

/// Points on a common round 2-sphere or 2-plane of S^4: rank of the lift
/// x -> (|x|^2, x, 1), inf -> (1, 0, 0, 0, 0, 0) is at most 4.
bool fiber_images_coplanar_or_cospherical(const std::vector<S4Pointd>& points, double tol = 1e-9);

/// Point of the Riemann sphere.
struct ExtComplex {
  std::complex<double> z;
  bool infinite = false;

  static ExtComplex infinity() { return {{}, true}; }
};

/// Cross-ratio (p - r)(q - s) / ((p - s)(q - r)), infinite factors dropped.
std::complex<double> cross_ratio(const ExtComplex& p, const ExtComplex& q, const ExtComplex& r, const ExtComplex& s);

/// True iff the cross-ratio is real. Throws on coincident inputs.
bool concircular(const ExtComplex& p, const ExtComplex& q, const ExtComplex& r, const ExtComplex& s,
                 double tol = 1e-12);

using ExactMatrix4 = Eigen::Matrix<QiSqrt3, 4, 4>;

/// Exact determinant by Gaussian elimination over Q(i, sqrt 3).
QiSqrt3 determinant(const ExactMatrix4& m);

struct EquivalenceVerdict {
  bool equivalent = false;
  bool singular = false;
  /// F(M x) = scale * E(x) when equivalent.
  std::optional<QiSqrt3> scale;
  std::string reason;
};

/// Substitutes z' = M x into z1'^3 + z2'^3 + z3'^3 + z4'^3 and checks the
/// result is a nonzero multiple of the transformed Fermat cubic.
EquivalenceVerdict verify_fermat_equivalence(const ExactMatrix4& m);

/// a = 1/2 + (sqrt3/6) i, b = conj(a), c = i / sqrt3.
struct FermatConstants {
  QiSqrt3 a, b, c;
};
FermatConstants fermat_constants();

/// The coordinate change exactly as printed (rows z2' and z4' identical).
ExactMatrix4 printed_fermat_matrix();

/// The printed matrix with its repeated last row replaced by
/// z4' = c x1 - b x4, one of the exactly verifying repairs.
ExactMatrix4 corrected_fermat_matrix();

struct TypoFix {
  int row = 0;  // 0-based row that was replaced
  std::string description;
  ExactMatrix4 matrix;
};

/// Replaces either duplicated row by k1 x_i + k2 x_j (k in {+-a, +-b, +-c},
/// i != j) and keeps the candidates that verify exactly.
std::vector<TypoFix> search_fermat_typo_fixes();

}  // namespace twistor
