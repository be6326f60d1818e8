#pragma once

// Quaternionic projective geometry of the twistor fibration CP^3 -> S^4.
//
// A point [z1, z2, z3, z4] is the quaternion pair (q1, q2) = (z1 + z2 j,
// z3 + z4 j), identified under left multiplication by nonzero complex
// scalars. The projection sends it to q2^-1 q1 in H = R^4 (or infinity when
// q2 = 0). Everything is templated on the scalar: double / complex<double>
// for numerics, QSqrt3 / QiSqrt3 for exact work.

#include "twistor/eigen_exact.hpp"
#include "twistor/exact.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistor {

template <typename C>
struct ComplexTraits;

template <>
struct ComplexTraits<std::complex<double>> {
  using Real = double;
  static Real re(const std::complex<double>& z) { return z.real(); }
  static Real im(const std::complex<double>& z) { return z.imag(); }
  static std::complex<double> make(Real re, Real im) { return {re, im}; }
  static std::complex<double> conj(const std::complex<double>& z) { return std::conj(z); }
  static bool is_zero(const std::complex<double>& z) { return z == 0.0; }
};

template <>
struct ComplexTraits<QiSqrt3> {
  using Real = QSqrt3;
  static const Real& re(const QiSqrt3& z) { return z.real(); }
  static const Real& im(const QiSqrt3& z) { return z.imag(); }
  static QiSqrt3 make(Real re, Real im) { return {std::move(re), std::move(im)}; }
  static QiSqrt3 conj(const QiSqrt3& z) { return z.conj(); }
  static bool is_zero(const QiSqrt3& z) { return z.is_zero(); }
};

inline bool scalar_is_zero(double v) { return v == 0.0; }
inline bool scalar_is_zero(const QSqrt3& v) { return v.is_zero(); }

/// w + x i + y j + z k.
template <typename Scalar>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  Quaternion() = default;
  Quaternion(Scalar w_, Scalar x_, Scalar y_, Scalar z_)
      : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  static Quaternion i() { return {Scalar(0), Scalar(1), Scalar(0), Scalar(0)}; }
  static Quaternion j() { return {Scalar(0), Scalar(0), Scalar(1), Scalar(0)}; }
  static Quaternion k() { return {Scalar(0), Scalar(0), Scalar(0), Scalar(1)}; }

  /// a + b j for complex a, b.
  template <typename C>
  static Quaternion from_complex_pair(const C& a, const C& b) {
    using T = ComplexTraits<C>;
    return {T::re(a), T::im(a), T::re(b), T::im(b)};
  }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  Scalar norm2() const { return w * w + x * x + y * y + z * z; }
  bool is_zero() const { return scalar_is_zero(w) && scalar_is_zero(x) && scalar_is_zero(y) && scalar_is_zero(z); }
  Quaternion inverse() const {
    if (is_zero()) throw std::domain_error("quaternion inverse of zero");
    Scalar n = norm2();
    return {w / n, -x / n, -y / n, -z / n};
  }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend Quaternion operator*(const Scalar& s, const Quaternion& q) { return {s * q.w, s * q.x, s * q.y, s * q.z}; }
  friend bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

/// Point of S^4 = R^4 u {inf}.
template <typename Real>
class S4Point {
 public:
  using Vector = Eigen::Matrix<Real, 4, 1>;

  S4Point() : S4Point(Vector::Zero()) {}
  explicit S4Point(Vector x) : x_(std::move(x)) {}
  S4Point(Real x1, Real x2, Real x3, Real x4) : x_(x1, x2, x3, x4) {}

  static S4Point infinity() {
    S4Point p;
    p.inf_ = true;
    return p;
  }

  bool is_infinity() const { return inf_; }
  const Vector& coords() const {
    if (inf_) throw std::domain_error("S4Point: infinity has no coordinates");
    return x_;
  }
  const Real& operator[](int k) const { return coords()[k]; }

  friend bool operator==(const S4Point& a, const S4Point& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    for (int k = 0; k < 4; ++k) {
      if (!(a.x_[k] == b.x_[k])) return false;
    }
    return true;
  }
  friend bool operator!=(const S4Point& a, const S4Point& b) { return !(a == b); }

 private:
  Vector x_;
  bool inf_ = false;
};

using S4Pointd = S4Point<double>;
using S4PointQ = S4Point<QSqrt3>;

S4Pointd to_double(const S4PointQ& p);
std::string to_string(const S4PointQ& p);
/// Euclidean distance with infinity treated as a single point (0 between two
/// infinities, +inf between infinity and a finite point).
double distance(const S4Pointd& a, const S4Pointd& b);

/// Homogeneous point of CP^3; rejects the zero quadruple.
template <typename C>
class CP3Point {
 public:
  using Vector = Eigen::Matrix<C, 4, 1>;

  explicit CP3Point(Vector z) : z_(std::move(z)) {
    bool all_zero = true;
    for (int k = 0; k < 4; ++k) all_zero = all_zero && ComplexTraits<C>::is_zero(z_[k]);
    if (all_zero) throw std::invalid_argument("CP3Point: all coordinates are zero");
  }
  CP3Point(C z1, C z2, C z3, C z4) : CP3Point(Vector(z1, z2, z3, z4)) {}

  const Vector& coords() const { return z_; }
  const C& operator[](int k) const { return z_[k]; }

  /// Same projective point: every 2x2 minor z_i w_j - z_j w_i vanishes.
  bool equivalent(const CP3Point& o) const {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (!ComplexTraits<C>::is_zero(z_[i] * o.z_[j] - z_[j] * o.z_[i])) return false;
      }
    }
    return true;
  }

 private:
  Vector z_;
};

using CP3Pointd = CP3Point<std::complex<double>>;
using CP3PointQ = CP3Point<QiSqrt3>;

/// Projective distance: largest 2x2 minor of the normalized pair.
double projective_distance(const CP3Pointd& a, const CP3Pointd& b);

/// pi([z]) = q2^-1 q1 with q1 = z1 + z2 j, q2 = z3 + z4 j; infinity when q2 = 0.
template <typename C>
S4Point<typename ComplexTraits<C>::Real> twistor_project(const CP3Point<C>& p) {
  using Real = typename ComplexTraits<C>::Real;
  using Q = Quaternion<Real>;
  Q q1 = Q::from_complex_pair(p[0], p[1]);
  Q q2 = Q::from_complex_pair(p[2], p[3]);
  if (q2.is_zero()) return S4Point<Real>::infinity();
  Q x = q2.inverse() * q1;
  return S4Point<Real>(x.w, x.x, x.y, x.z);
}

/// Real structure: [z] -> [-conj z2, conj z1, -conj z4, conj z3].
template <typename C>
CP3Point<C> tau(const CP3Point<C>& p) {
  using T = ComplexTraits<C>;
  return CP3Point<C>(-T::conj(p[1]), T::conj(p[0]), -T::conj(p[3]), T::conj(p[2]));
}

/// Raised by fiber_map for the point at infinity; use infinity_fiber().
class InfinityFiberError : public std::domain_error {
 public:
  InfinityFiberError() : std::domain_error("fiber over infinity: use infinity_fiber()") {}
};

/// lambda -> lambda p1 + p2, the affine chart of the twistor line over `base`.
template <typename C>
struct FiberMap {
  using Vector = Eigen::Matrix<C, 4, 1>;
  S4Point<typename ComplexTraits<C>::Real> base;
  Vector p1;
  Vector p2;

  Vector operator()(const C& lambda) const {
    Vector out;
    for (int k = 0; k < 4; ++k) out[k] = lambda * p1[k] + p2[k];
    return out;
  }
};

/// p1 = (x1 + i x2, x3 + i x4, 1, 0), p2 = (-x3 + i x4, x1 - i x2, 0, 1).
template <typename C>
FiberMap<C> fiber_map(const S4Point<typename ComplexTraits<C>::Real>& x) {
  using T = ComplexTraits<C>;
  using Real = typename T::Real;
  if (x.is_infinity()) throw InfinityFiberError();
  const auto& v = x.coords();
  FiberMap<C> f{x, {}, {}};
  f.p1 << T::make(v[0], v[1]), T::make(v[2], v[3]), T::make(Real(1), Real(0)), T::make(Real(0), Real(0));
  f.p2 << T::make(-v[2], v[3]), T::make(v[0], -v[1]), T::make(Real(0), Real(0)), T::make(Real(1), Real(0));
  return f;
}

/// The line {[z1, z2, 0, 0]} over infinity, as lambda -> (lambda, 1, 0, 0).
template <typename C>
FiberMap<C> infinity_fiber() {
  using T = ComplexTraits<C>;
  using Real = typename T::Real;
  FiberMap<C> f{S4Point<Real>::infinity(), {}, {}};
  const C zero = T::make(Real(0), Real(0));
  const C one = T::make(Real(1), Real(0));
  f.p1 << one, zero, zero, zero;
  f.p2 << zero, one, zero, zero;
  return f;
}

// ---- Conformal symmetries -------------------------------------------------

enum class Generator { Theta, Sigma, Iota };

char generator_symbol(Generator g);

/// theta: rotation by 2 pi / 3 in the (x1, x2) plane,
///   (x1, x2) -> (cos x1 + sin x2, -sin x1 + cos x2);
/// sigma: (x1, x2, x3, x4) -> (x1, x2, -x3, -x4);
/// iota:  x -> (x1, -x2, -x3, -x4) / |x|^2, swapping 0 and infinity.
template <typename Real>
S4Point<Real> apply_generator(Generator g, const S4Point<Real>& p);

/// Word over the generators, applied left to right: the first letter acts
/// first.
class ConformalMap {
 public:
  ConformalMap() = default;
  explicit ConformalMap(std::vector<Generator> word) : word_(std::move(word)) {}

  static ConformalMap parse(const std::string& word);

  const std::vector<Generator>& word() const { return word_; }
  std::string to_string() const;

  /// this first, then `then`.
  ConformalMap followed_by(const ConformalMap& then) const;

  template <typename Real>
  S4Point<Real> operator()(const S4Point<Real>& p) const {
    S4Point<Real> q = p;
    for (Generator g : word_) q = apply_generator(g, q);
    return q;
  }

 private:
  std::vector<Generator> word_;
};

template <typename Real>
S4Point<Real> apply_conformal(const ConformalMap& g, const S4Point<Real>& x) {
  return g(x);
}

/// The fixed sample used to decide equality of maps: 8 points with
/// coordinates in {+-1, +-2, +-3, +-1/2}, drawn from a seeded generator.
std::vector<S4PointQ> group_sample_points();

/// All distinct maps generated by theta, sigma, iota (shortest words, found
/// breadth-first). Throws std::logic_error if closure is not reached by
/// word length 8.
std::vector<ConformalMap> enumerate_group();

/// Index of the element of `group` acting like g on the sample, or -1.
int find_in_group(const std::vector<ConformalMap>& group, const ConformalMap& g);

}  // namespace twistor
