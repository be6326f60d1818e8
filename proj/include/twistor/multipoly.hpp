#pragma once

// Exact sparse multivariate polynomials over a coefficient ring.
//
// Terms live in a map keyed by exponent vectors under graded-lexicographic
// order; zero coefficients are never stored. Iteration runs from the lowest
// to the highest term; serialization walks the map in reverse so the leading
// term comes first.

#include "twistor/exact.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twistor {

using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Graded-lexicographic order: total degree first, then lexicographic with
/// the first variable most significant.
struct GradedLexLess {
  bool operator()(const Exponents& a, const Exponents& b) const {
    int da = total_degree(a);
    int db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

inline std::vector<std::string> default_vars(std::size_t n, const std::string& stem = "x") {
  std::vector<std::string> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(stem + std::to_string(k + 1));
  return v;
}

template <typename Coeff>
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, Coeff, GradedLexLess>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static MultiPoly constant(std::vector<std::string> vars, const Coeff& c) {
    MultiPoly p(std::move(vars));
    p.add_term(Exponents(p.num_vars(), 0), c);
    return p;
  }

  static MultiPoly variable(std::vector<std::string> vars, std::size_t index) {
    MultiPoly p(std::move(vars));
    if (index >= p.num_vars()) throw std::out_of_range("variable index out of range");
    Exponents e(p.num_vars(), 0);
    e[index] = 1;
    p.add_term(std::move(e), Coeff(1));
    return p;
  }

  static MultiPoly monomial(std::vector<std::string> vars, Exponents e, const Coeff& c) {
    MultiPoly p(std::move(vars));
    p.add_term(std::move(e), c);
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t num_vars() const { return vars_.size(); }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree, or -1 for the zero polynomial.
  int total_degree() const { return terms_.empty() ? -1 : twistor::total_degree(terms_.rbegin()->first); }

  int degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
    return d;
  }

  Coeff coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  MultiPoly homogeneous_part(int degree) const {
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) {
      if (twistor::total_degree(e) == degree) out.terms_.emplace(e, c);
    }
    return out;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = total_degree();
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return twistor::total_degree(t.first) == d; });
  }

  /// Accumulates c * x^e into the polynomial.
  void add_term(Exponents e, const Coeff& c) {
    if (e.size() != vars_.size()) throw std::invalid_argument("exponent vector length mismatch");
    if (std::any_of(e.begin(), e.end(), [](int k) { return k < 0; })) {
      throw std::invalid_argument("negative exponent");
    }
    if (RingTraits<Coeff>::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (RingTraits<Coeff>::is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  MultiPoly& operator-=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly& operator*=(const Coeff& s) {
    if (RingTraits<Coeff>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly l, const MultiPoly& r) { return l += r; }
  friend MultiPoly operator-(MultiPoly l, const MultiPoly& r) { return l -= r; }
  friend MultiPoly operator*(MultiPoly l, const Coeff& s) { return l *= s; }
  friend MultiPoly operator*(const Coeff& s, MultiPoly r) { return r *= s; }
  friend MultiPoly operator-(MultiPoly p) {
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
  }

  friend MultiPoly operator*(const MultiPoly& l, const MultiPoly& r) {
    l.check_compatible(r);
    MultiPoly out(l.vars_);
    Exponents e(l.num_vars());
    for (const auto& [el, cl] : l.terms_) {
      for (const auto& [er, cr] : r.terms_) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = el[k] + er[k];
        out.add_term(e, cl * cr);
      }
    }
    return out;
  }

  friend bool operator==(const MultiPoly& l, const MultiPoly& r) {
    return l.vars_ == r.vars_ && l.terms_ == r.terms_;
  }
  friend bool operator!=(const MultiPoly& l, const MultiPoly& r) { return !(l == r); }

  MultiPoly pow(unsigned n) const {
    MultiPoly result = constant(vars_, Coeff(1));
    MultiPoly base = *this;
    while (n != 0) {
      if (n & 1U) result *= base;
      n >>= 1U;
      if (n != 0) base *= base;
    }
    return result;
  }

  /// Evaluates at a point whose entries are of type V; `lift` maps a
  /// coefficient into V. Exact when V is exact.
  template <typename V, typename Lift>
  V evaluate(std::span<const V> point, Lift&& lift) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("evaluation point has wrong length");
    std::vector<std::vector<V>> powers(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      int dk = std::max(degree_in(k), 0);
      powers[k].reserve(dk + 1);
      powers[k].push_back(V(1));
      for (int j = 1; j <= dk; ++j) powers[k].push_back(powers[k].back() * point[k]);
    }
    V sum(0);
    for (const auto& [e, c] : terms_) {
      V term = lift(c);
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] != 0) term = term * powers[k][e[k]];
      }
      sum = sum + term;
    }
    return sum;
  }

  /// Evaluation when point entries share the coefficient type.
  Coeff evaluate(std::span<const Coeff> point) const {
    return evaluate<Coeff>(point, [](const Coeff& c) { return c; });
  }

  template <typename Out, typename F>
  MultiPoly<Out> map_coefficients(F&& f) const {
    MultiPoly<Out> out(vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

  /// Substitutes images[k] for variable k. Every image must share one
  /// variable list; `lift` maps this ring into the images' ring.
  template <typename Out, typename Lift>
  MultiPoly<Out> compose(const std::vector<MultiPoly<Out>>& images, Lift&& lift) const {
    if (images.size() != vars_.size()) throw std::invalid_argument("compose: wrong number of images");
    if (images.empty()) throw std::invalid_argument("compose: no images");
    const auto& out_vars = images.front().vars();
    for (const auto& img : images) {
      if (img.vars() != out_vars) throw std::invalid_argument("compose: image variable lists differ");
    }
    std::vector<std::vector<MultiPoly<Out>>> powers(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      int dk = std::max(degree_in(k), 0);
      powers[k].push_back(MultiPoly<Out>::constant(out_vars, Out(1)));
      for (int j = 1; j <= dk; ++j) powers[k].push_back(powers[k].back() * images[k]);
    }
    MultiPoly<Out> out(out_vars);
    for (const auto& [e, c] : terms_) {
      MultiPoly<Out> term = MultiPoly<Out>::constant(out_vars, lift(c));
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] != 0) term *= powers[k][e[k]];
      }
      out += term;
    }
    return out;
  }

  MultiPoly derivative(std::size_t var) const {
    if (var >= vars_.size()) throw std::out_of_range("derivative: variable index out of range");
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      --d[var];
      out.add_term(std::move(d), c * Coeff(e[var]));
    }
    return out;
  }

  /// Same polynomial under a new variable list of equal length.
  MultiPoly renamed(std::vector<std::string> vars) const {
    if (vars.size() != vars_.size()) throw std::invalid_argument("renamed: variable count differs");
    MultiPoly out(std::move(vars));
    out.terms_ = terms_;
    return out;
  }

 private:
  void check_compatible(const MultiPoly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("polynomial variable lists differ");
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

template <typename Coeff>
std::ostream& operator<<(std::ostream& os, const MultiPoly<Coeff>& p) {
  if (p.is_zero()) return os << '0';
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << it->second;
    for (std::size_t k = 0; k < it->first.size(); ++k) {
      if (it->first[k] == 1) os << '*' << p.vars()[k];
      if (it->first[k] > 1) os << '*' << p.vars()[k] << '^' << it->first[k];
    }
  }
  return os;
}

using IntPoly = MultiPoly<Integer>;
using RatPoly = MultiPoly<Rational>;
using GaussPoly = MultiPoly<GaussRational>;
using Sqrt3Poly = MultiPoly<QiSqrt3>;

}  // namespace twistor
