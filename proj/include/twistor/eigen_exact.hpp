#pragma once

// Lets Eigen's fixed-size containers hold the exact field types. Only
// storage and ring arithmetic are used with these scalars; anything that
// needs abs() or pivoting is done by hand.

#include "twistor/exact.hpp"

#include <Eigen/Core>

namespace Eigen {

template <>
struct NumTraits<twistor::QSqrt3> : GenericNumTraits<twistor::QSqrt3> {
  using Real = twistor::QSqrt3;
  using NonInteger = twistor::QSqrt3;
  using Nested = twistor::QSqrt3;
  using Literal = twistor::QSqrt3;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 8, AddCost = 16, MulCost = 64 };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

// Treated as an opaque field element (IsComplex = 0) so Eigen never routes
// it through std::complex helpers.
template <>
struct NumTraits<twistor::QiSqrt3> : GenericNumTraits<twistor::QiSqrt3> {
  using Real = twistor::QiSqrt3;
  using NonInteger = twistor::QiSqrt3;
  using Nested = twistor::QiSqrt3;
  using Literal = twistor::QiSqrt3;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 16, AddCost = 32, MulCost = 128 };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen
