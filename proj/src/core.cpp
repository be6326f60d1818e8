#include "twistor/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <array>
#include <random>

namespace twistor {

namespace {

template <typename Real>
struct RotationConstants;

template <>
struct RotationConstants<double> {
  static double cos() { return -0.5; }
  static double sin() { return std::sqrt(3.0) / 2.0; }
};

template <>
struct RotationConstants<QSqrt3> {
  static QSqrt3 cos() { return QSqrt3(Rational(-1, 2)); }
  static QSqrt3 sin() { return QSqrt3(Rational(0), Rational(1, 2)); }
};

bool same_action(const std::vector<S4PointQ>& a, const std::vector<S4PointQ>& b) {
  return std::equal(a.begin(), a.end(), b.begin());
}

std::vector<S4PointQ> act(const ConformalMap& g, const std::vector<S4PointQ>& pts) {
  std::vector<S4PointQ> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(g(p));
  return out;
}

}  // namespace

S4Pointd to_double(const S4PointQ& p) {
  if (p.is_infinity()) return S4Pointd::infinity();
  const auto& v = p.coords();
  return S4Pointd(v[0].to_double(), v[1].to_double(), v[2].to_double(), v[3].to_double());
}

std::string to_string(const S4PointQ& p) {
  if (p.is_infinity()) return "inf";
  std::string s = "(";
  for (int k = 0; k < 4; ++k) s += (k ? ", " : "") + to_string(p.coords()[k]);
  return s + ")";
}

double distance(const S4Pointd& a, const S4Pointd& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity() || b.is_infinity()) return std::numeric_limits<double>::infinity();
  return (a.coords() - b.coords()).norm();
}

double projective_distance(const CP3Pointd& a, const CP3Pointd& b) {
  const auto u = a.coords().normalized();
  const auto v = b.coords().normalized();
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) worst = std::max(worst, std::abs(u[i] * v[j] - u[j] * v[i]));
  }
  return worst;
}

char generator_symbol(Generator g) {
  switch (g) {
    case Generator::Theta: return 't';
    case Generator::Sigma: return 's';
    case Generator::Iota: return 'i';
  }
  return '?';
}

template <typename Real>
S4Point<Real> apply_generator(Generator g, const S4Point<Real>& p) {
  switch (g) {
    case Generator::Theta: {
      if (p.is_infinity()) return p;
      const auto& x = p.coords();
      const Real c = RotationConstants<Real>::cos();
      const Real s = RotationConstants<Real>::sin();
      return S4Point<Real>(c * x[0] + s * x[1], -(s * x[0]) + c * x[1], x[2], x[3]);
    }
    case Generator::Sigma: {
      if (p.is_infinity()) return p;
      const auto& x = p.coords();
      return S4Point<Real>(x[0], x[1], -x[2], -x[3]);
    }
    case Generator::Iota: {
      if (p.is_infinity()) return S4Point<Real>(Real(0), Real(0), Real(0), Real(0));
      const auto& x = p.coords();
      const Real n = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
      if (scalar_is_zero(n)) return S4Point<Real>::infinity();
      return S4Point<Real>(x[0] / n, -x[1] / n, -x[2] / n, -x[3] / n);
    }
  }
  throw std::logic_error("unknown generator");
}

template S4Point<double> apply_generator(Generator, const S4Point<double>&);
template S4Point<QSqrt3> apply_generator(Generator, const S4Point<QSqrt3>&);

ConformalMap ConformalMap::parse(const std::string& word) {
  std::vector<Generator> w;
  for (char ch : word) {
    switch (ch) {
      case 't': w.push_back(Generator::Theta); break;
      case 's': w.push_back(Generator::Sigma); break;
      case 'i': w.push_back(Generator::Iota); break;
      default: throw std::invalid_argument(std::string("unknown generator letter '") + ch + "'");
    }
  }
  return ConformalMap(std::move(w));
}

std::string ConformalMap::to_string() const {
  if (word_.empty()) return "e";
  std::string s;
  for (Generator g : word_) s.push_back(generator_symbol(g));
  return s;
}

ConformalMap ConformalMap::followed_by(const ConformalMap& then) const {
  std::vector<Generator> w = word_;
  w.insert(w.end(), then.word_.begin(), then.word_.end());
  return ConformalMap(std::move(w));
}

std::vector<S4PointQ> group_sample_points() {
  static const std::array<Rational, 8> values{Rational(1), Rational(-1), Rational(2), Rational(-2),
                                              Rational(3), Rational(-3), Rational(1, 2), Rational(-1, 2)};
  std::mt19937 rng(20240607u);
  std::uniform_int_distribution<int> pick(0, 7);
  std::vector<S4PointQ> pts;
  for (int n = 0; n < 8; ++n) {
    S4PointQ::Vector v;
    for (int k = 0; k < 4; ++k) v[k] = QSqrt3(values[pick(rng)]);
    pts.emplace_back(v);
  }
  return pts;
}

std::vector<ConformalMap> enumerate_group() {
  constexpr std::size_t kMaxWordLength = 8;
  const auto sample = group_sample_points();
  const std::array<Generator, 3> gens{Generator::Theta, Generator::Sigma, Generator::Iota};

  std::vector<ConformalMap> elements{ConformalMap()};
  std::vector<std::vector<S4PointQ>> actions{sample};
  std::vector<std::size_t> frontier{0};
  for (std::size_t len = 1; len <= kMaxWordLength; ++len) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (Generator g : gens) {
        ConformalMap w = elements[idx].followed_by(ConformalMap({g}));
        auto a = act(ConformalMap({g}), actions[idx]);
        bool known = std::any_of(actions.begin(), actions.end(), [&](const auto& b) { return same_action(a, b); });
        if (known) continue;
        elements.push_back(std::move(w));
        actions.push_back(std::move(a));
        next.push_back(elements.size() - 1);
      }
    }
    if (next.empty()) return elements;
    frontier = std::move(next);
  }
  throw std::logic_error("enumerate_group: no closure by word length 8");
}

int find_in_group(const std::vector<ConformalMap>& group, const ConformalMap& g) {
  const auto sample = group_sample_points();
  const auto a = act(g, sample);
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (same_action(act(group[k], sample), a)) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace twistor
