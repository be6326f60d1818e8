#pragma once

// Floating-point compiled form of a MultiPoly in four real variables, with
// value and gradient. Templated on the coefficient scalar (double for the
// real locus polynomials, std::complex<double> for fibre coefficients).

#include "twistor/multipoly.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <vector>

namespace twistor {

template <typename Scalar>
class NumericPoly {
 public:
  using Gradient = Eigen::Matrix<Scalar, 4, 1>;

  NumericPoly() = default;

  template <typename Coeff>
  explicit NumericPoly(const MultiPoly<Coeff>& p) {
    if (p.num_vars() != 4) throw std::invalid_argument("NumericPoly: four variables required");
    for (const auto& [e, c] : p.terms()) {
      Term t;
      for (int k = 0; k < 4; ++k) {
        t.e[k] = e[k];
        max_deg_ = std::max(max_deg_, e[k]);
      }
      if (max_deg_ > kMaxDegree) throw std::invalid_argument("NumericPoly: partial degree too large");
      std::complex<double> z = RingTraits<Coeff>::to_complex(c);
      if constexpr (std::is_same_v<Scalar, double>) {
        t.c = z.real();
      } else {
        t.c = z;
      }
      terms_.push_back(t);
    }
  }

  bool empty() const { return terms_.empty(); }
  int max_partial_degree() const { return max_deg_; }

  Scalar operator()(const Eigen::Vector4d& x) const {
    Powers pw = powers(x);
    Scalar s(0);
    for (const auto& t : terms_) {
      s += t.c * (pw[0][t.e[0]] * pw[1][t.e[1]] * pw[2][t.e[2]] * pw[3][t.e[3]]);
    }
    return s;
  }

  Scalar value_and_gradient(const Eigen::Vector4d& x, Gradient& grad) const {
    Powers pw = powers(x);
    Scalar s(0);
    grad.setZero();
    for (const auto& t : terms_) {
      const double p0 = pw[0][t.e[0]], p1 = pw[1][t.e[1]], p2 = pw[2][t.e[2]], p3 = pw[3][t.e[3]];
      s += t.c * (p0 * p1 * p2 * p3);
      if (t.e[0] > 0) grad[0] += t.c * (t.e[0] * pw[0][t.e[0] - 1] * p1 * p2 * p3);
      if (t.e[1] > 0) grad[1] += t.c * (t.e[1] * p0 * pw[1][t.e[1] - 1] * p2 * p3);
      if (t.e[2] > 0) grad[2] += t.c * (t.e[2] * p0 * p1 * pw[2][t.e[2] - 1] * p3);
      if (t.e[3] > 0) grad[3] += t.c * (t.e[3] * p0 * p1 * p2 * pw[3][t.e[3] - 1]);
    }
    return s;
  }

 private:
  struct Term {
    std::array<int, 4> e{};
    Scalar c{};
  };
  static constexpr int kMaxDegree = 47;
  using Powers = std::array<std::array<double, kMaxDegree + 1>, 4>;

  Powers powers(const Eigen::Vector4d& x) const {
    Powers pw;
    for (int k = 0; k < 4; ++k) {
      pw[k][0] = 1.0;
      for (int j = 1; j <= max_deg_; ++j) pw[k][j] = pw[k][j - 1] * x[k];
    }
    return pw;
  }

  std::vector<Term> terms_;
  int max_deg_ = 0;
};

using RealNumericPoly = NumericPoly<double>;
using ComplexNumericPoly = NumericPoly<std::complex<double>>;

}  // namespace twistor
