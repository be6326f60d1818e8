#pragma once

// Exact scalar types used by the symbolic pipeline.
//
//   Integer        Z            (GMP)
//   Rational       Q            (GMP)
//   QSqrt3         Q(sqrt 3)    a + b*sqrt(3)
//   GaussRational  Q(i)         re + i*im, components in Q
//   QiSqrt3        Q(i,sqrt 3)  re + i*im, components in Q(sqrt 3)

#include <gmpxx.h>

#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistor {

using Integer = mpz_class;
using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Integer& v);
std::string to_string(const Rational& v);

/// Element a + b*sqrt(3) of the real quadratic field Q(sqrt 3).
class QSqrt3 {
 public:
  QSqrt3() = default;
  QSqrt3(int a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QSqrt3(Rational a) : a_(std::move(a)) {}  // NOLINT
  QSqrt3(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static QSqrt3 sqrt3() { return {Rational(0), Rational(1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt3_part() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  /// Galois conjugate a - b*sqrt(3).
  QSqrt3 galois() const { return {a_, -b_}; }
  /// Field norm a^2 - 3 b^2.
  Rational norm() const { return a_ * a_ - 3 * b_ * b_; }
  QSqrt3 inverse() const;
  /// Exact sign (-1, 0, 1).
  int sign() const;
  double to_double() const { return a_.get_d() + b_.get_d() * 1.7320508075688772; }

  QSqrt3& operator+=(const QSqrt3& o) { a_ += o.a_; b_ += o.b_; return *this; }
  QSqrt3& operator-=(const QSqrt3& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  QSqrt3& operator*=(const QSqrt3& o);
  QSqrt3& operator/=(const QSqrt3& o) { return *this *= o.inverse(); }

  friend QSqrt3 operator+(QSqrt3 l, const QSqrt3& r) { return l += r; }
  friend QSqrt3 operator-(QSqrt3 l, const QSqrt3& r) { return l -= r; }
  friend QSqrt3 operator*(QSqrt3 l, const QSqrt3& r) { return l *= r; }
  friend QSqrt3 operator/(QSqrt3 l, const QSqrt3& r) { return l /= r; }
  friend QSqrt3 operator-(const QSqrt3& v) { return {-v.a_, -v.b_}; }
  friend bool operator==(const QSqrt3& l, const QSqrt3& r) { return l.a_ == r.a_ && l.b_ == r.b_; }
  friend bool operator!=(const QSqrt3& l, const QSqrt3& r) { return !(l == r); }
  friend bool operator<(const QSqrt3& l, const QSqrt3& r) { return (l - r).sign() < 0; }
  friend std::ostream& operator<<(std::ostream& os, const QSqrt3& v);

 private:
  Rational a_{0};
  Rational b_{0};
};

std::string to_string(const QSqrt3& v);

/// re + i*im over an exact real field. std::complex is unspecified for
/// non-floating types, hence this small replacement.
template <typename Real>
class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(int re) : re_(re) {}  // NOLINT
  ExactComplex(Real re) : re_(std::move(re)) {}  // NOLINT
  ExactComplex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

  static ExactComplex i() { return {Real(0), Real(1)}; }

  const Real& real() const { return re_; }
  const Real& imag() const { return im_; }
  bool is_zero() const { return is_zero_real(re_) && is_zero_real(im_); }
  bool is_real() const { return is_zero_real(im_); }
  ExactComplex conj() const { return {re_, -im_}; }
  Real norm2() const { return re_ * re_ + im_ * im_; }
  ExactComplex inverse() const {
    if (is_zero()) throw std::domain_error("ExactComplex: division by zero");
    Real n = norm2();
    return {re_ / n, -im_ / n};
  }

  ExactComplex& operator+=(const ExactComplex& o) { re_ += o.re_; im_ += o.im_; return *this; }
  ExactComplex& operator-=(const ExactComplex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
  ExactComplex& operator*=(const ExactComplex& o) {
    Real re = re_ * o.re_ - im_ * o.im_;
    Real im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  ExactComplex& operator/=(const ExactComplex& o) { return *this *= o.inverse(); }

  friend ExactComplex operator+(ExactComplex l, const ExactComplex& r) { return l += r; }
  friend ExactComplex operator-(ExactComplex l, const ExactComplex& r) { return l -= r; }
  friend ExactComplex operator*(ExactComplex l, const ExactComplex& r) { return l *= r; }
  friend ExactComplex operator/(ExactComplex l, const ExactComplex& r) { return l /= r; }
  friend ExactComplex operator-(const ExactComplex& v) { return {-v.re_, -v.im_}; }
  friend bool operator==(const ExactComplex& l, const ExactComplex& r) {
    return l.re_ == r.re_ && l.im_ == r.im_;
  }
  friend bool operator!=(const ExactComplex& l, const ExactComplex& r) { return !(l == r); }
  friend std::ostream& operator<<(std::ostream& os, const ExactComplex& v) {
    return os << '(' << v.re_ << ")+i(" << v.im_ << ')';
  }

 private:
  static bool is_zero_real(const Rational& v) { return sgn(v) == 0; }
  static bool is_zero_real(const QSqrt3& v) { return v.is_zero(); }

  Real re_{0};
  Real im_{0};
};

using GaussRational = ExactComplex<Rational>;
using QiSqrt3 = ExactComplex<QSqrt3>;

inline QiSqrt3 to_qisqrt3(const GaussRational& v) { return {QSqrt3(v.real()), QSqrt3(v.imag())}; }

// Coefficient-ring traits: name tags and the string encoding used by the
// polynomial JSON format.

enum class RingTag { Int, GaussRat, Sqrt3Field };

std::string ring_name(RingTag tag);
RingTag parse_ring_name(const std::string& name);

template <typename C>
struct RingTraits;

template <>
struct RingTraits<Integer> {
  static constexpr RingTag tag = RingTag::Int;
  static bool is_zero(const Integer& c) { return sgn(c) == 0; }
  static std::vector<std::string> encode(const Integer& c) { return {to_string(c)}; }
  static Integer decode(const std::vector<std::string>& s);
  static std::complex<double> to_complex(const Integer& c) { return {c.get_d(), 0.0}; }
};

// Rational polynomials are an intermediate form only; they are not serialized.
template <>
struct RingTraits<Rational> {
  static bool is_zero(const Rational& c) { return sgn(c) == 0; }
  static std::complex<double> to_complex(const Rational& c) { return {c.get_d(), 0.0}; }
};

template <>
struct RingTraits<GaussRational> {
  static constexpr RingTag tag = RingTag::GaussRat;
  static bool is_zero(const GaussRational& c) { return c.is_zero(); }
  static std::vector<std::string> encode(const GaussRational& c) {
    return {to_string(c.real()), to_string(c.imag())};
  }
  static GaussRational decode(const std::vector<std::string>& s);
  static std::complex<double> to_complex(const GaussRational& c) {
    return {c.real().get_d(), c.imag().get_d()};
  }
};

template <>
struct RingTraits<QiSqrt3> {
  static constexpr RingTag tag = RingTag::Sqrt3Field;
  static bool is_zero(const QiSqrt3& c) { return c.is_zero(); }
  /// a + b*sqrt3 + c*i + d*i*sqrt3 as four rational strings {a, b, c, d}.
  static std::vector<std::string> encode(const QiSqrt3& c) {
    return {to_string(c.real().rational_part()), to_string(c.real().sqrt3_part()),
            to_string(c.imag().rational_part()), to_string(c.imag().sqrt3_part())};
  }
  static QiSqrt3 decode(const std::vector<std::string>& s);
  static std::complex<double> to_complex(const QiSqrt3& c) {
    return {c.real().to_double(), c.imag().to_double()};
  }
};

}  // namespace twistor
