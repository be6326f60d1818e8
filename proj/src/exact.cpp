#include "twistor/exact.hpp"

#include <cctype>

namespace twistor {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  bool digit_before = false;
  bool digit_after = false;
  for (std::size_t k = start; k < s.size(); ++k) {
    if (s[k] == '/') {
      if (seen_slash) throw std::invalid_argument("malformed rational literal: " + text);
      seen_slash = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[k]))) {
      (seen_slash ? digit_after : digit_before) = true;
    } else {
      throw std::invalid_argument("malformed rational literal: " + text);
    }
  }
  if (!digit_before || (seen_slash && !digit_after)) {
    throw std::invalid_argument("malformed rational literal: " + text);
  }
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal: " + text);
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + text);
  r.canonicalize();
  return r;
}

std::string to_string(const Integer& v) { return v.get_str(10); }
std::string to_string(const Rational& v) { return v.get_str(10); }

QSqrt3 QSqrt3::inverse() const {
  Rational n = norm();
  if (sgn(n) == 0) throw std::domain_error("QSqrt3: division by zero");
  return {a_ / n, -b_ / n};
}

QSqrt3& QSqrt3::operator*=(const QSqrt3& o) {
  Rational a = a_ * o.a_ + 3 * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

int QSqrt3::sign() const {
  // sign(a + b sqrt3): compare a^2 against 3 b^2 when the signs disagree.
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  Rational lhs = a_ * a_;
  Rational rhs = 3 * b_ * b_;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // unreachable for nonzero b: sqrt3 is irrational
  return c > 0 ? sa : sb;
}

std::ostream& operator<<(std::ostream& os, const QSqrt3& v) { return os << to_string(v); }

std::string to_string(const QSqrt3& v) {
  if (sgn(v.sqrt3_part()) == 0) return to_string(v.rational_part());
  std::string s;
  if (sgn(v.rational_part()) != 0) s = to_string(v.rational_part()) + (sgn(v.sqrt3_part()) > 0 ? "+" : "");
  return s + to_string(v.sqrt3_part()) + "*sqrt3";
}

std::string ring_name(RingTag tag) {
  switch (tag) {
    case RingTag::Int: return "INT";
    case RingTag::GaussRat: return "GAUSS_RAT";
    case RingTag::Sqrt3Field: return "SQRT3_FIELD";
  }
  return "?";
}

RingTag parse_ring_name(const std::string& name) {
  if (name == "INT") return RingTag::Int;
  if (name == "GAUSS_RAT") return RingTag::GaussRat;
  if (name == "SQRT3_FIELD") return RingTag::Sqrt3Field;
  throw std::invalid_argument("unknown coefficient ring: " + name);
}

namespace {
void expect_parts(const std::vector<std::string>& s, std::size_t n, const char* ring) {
  if (s.size() != n) {
    throw std::invalid_argument(std::string("coefficient for ring ") + ring + " needs " +
                                std::to_string(n) + " component(s)");
  }
}
}  // namespace

Integer RingTraits<Integer>::decode(const std::vector<std::string>& s) {
  expect_parts(s, 1, "INT");
  Rational r = parse_rational(s[0]);
  if (r.get_den() != 1) throw std::invalid_argument("non-integral INT coefficient: " + s[0]);
  return r.get_num();
}

GaussRational RingTraits<GaussRational>::decode(const std::vector<std::string>& s) {
  expect_parts(s, 2, "GAUSS_RAT");
  return {parse_rational(s[0]), parse_rational(s[1])};
}

QiSqrt3 RingTraits<QiSqrt3>::decode(const std::vector<std::string>& s) {
  expect_parts(s, 4, "SQRT3_FIELD");
  return {QSqrt3(parse_rational(s[0]), parse_rational(s[1])),
          QSqrt3(parse_rational(s[2]), parse_rational(s[3]))};
}

}  // namespace twistor
