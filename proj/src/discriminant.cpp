#include "twistor/discriminant.hpp"

#include <stdexcept>

namespace twistor {

namespace {

const std::vector<std::string>& z_vars() {
  static const std::vector<std::string> v = default_vars(4, "z");
  return v;
}

GaussRational gi(long re, long im) { return {Rational(re), Rational(im)}; }

}  // namespace

std::string chart_name(Chart chart) { return chart == Chart::Standard ? "standard" : "inverted"; }

Surface::Surface(GaussPoly f) : f_(std::move(f)) {
  if (f_.num_vars() != 4) throw std::invalid_argument("surface polynomial must have four variables");
  if (f_.is_zero()) throw std::invalid_argument("surface polynomial is zero");
  if (!f_.is_homogeneous()) throw std::invalid_argument("surface polynomial is not homogeneous");
}

Surface Surface::from_integer(const IntPoly& f) {
  return Surface(f.map_coefficients<GaussRational>([](const Integer& c) { return GaussRational(Rational(c)); }));
}

Surface transformed_fermat_cubic() {
  GaussPoly f(z_vars());
  f.add_term({1, 0, 0, 2}, 1);
  f.add_term({2, 0, 0, 1}, 1);
  f.add_term({0, 1, 2, 0}, 1);
  f.add_term({0, 2, 1, 0}, 1);
  return Surface(std::move(f));
}

Surface fermat_cubic() {
  GaussPoly f(z_vars());
  f.add_term({3, 0, 0, 0}, 1);
  f.add_term({0, 3, 0, 0}, 1);
  f.add_term({0, 0, 3, 0}, 1);
  f.add_term({0, 0, 0, 3}, 1);
  return Surface(std::move(f));
}

std::vector<std::string> fiber_map_vars() { return {"x1", "x2", "x3", "x4", "lam"}; }

std::array<GaussPoly, 4> symbolic_fiber_map(Chart chart) {
  const auto vars = fiber_map_vars();
  auto term = [&](Exponents e, GaussRational c) { return GaussPoly::monomial(vars, std::move(e), c); };
  // q = a + b j with a = x1 + i x2, b = x3 + i x4; (lambda + j) q = (lambda a - conj b) + (lambda b + conj a) j.
  GaussPoly z1 = term({1, 0, 0, 0, 1}, gi(1, 0)) + term({0, 1, 0, 0, 1}, gi(0, 1)) +
                 term({0, 0, 1, 0, 0}, gi(-1, 0)) + term({0, 0, 0, 1, 0}, gi(0, 1));
  GaussPoly z2 = term({0, 0, 1, 0, 1}, gi(1, 0)) + term({0, 0, 0, 1, 1}, gi(0, 1)) +
                 term({1, 0, 0, 0, 0}, gi(1, 0)) + term({0, 1, 0, 0, 0}, gi(0, -1));
  GaussPoly z3 = term({0, 0, 0, 0, 1}, gi(1, 0));
  GaussPoly z4 = GaussPoly::constant(vars, gi(1, 0));
  if (chart == Chart::Standard) return {z1, z2, z3, z4};
  return {z3, z4, z1, z2};
}

FiberCubic substitute_affine(const Surface& f, const std::array<GaussPoly, 4>& maps) {
  if (f.degree() != 3) {
    throw std::invalid_argument("substitute_affine: surface has degree " + std::to_string(f.degree()) +
                                ", only cubics are supported");
  }
  const auto& vars = maps[0].vars();
  if (vars.empty()) throw std::invalid_argument("substitute_affine: empty fibre map");
  const std::size_t lam = vars.size() - 1;
  std::vector<GaussPoly> images(maps.begin(), maps.end());
  GaussPoly composed = f.poly().compose<GaussRational>(images, [](const GaussRational& c) { return c; });

  FiberCubic out;
  std::vector<std::string> xs(vars.begin(), vars.end() - 1);
  for (auto& ck : out.c) ck = GaussPoly(xs);
  for (const auto& [e, c] : composed.terms()) {
    int k = e[lam];
    if (k > 3) throw std::logic_error("substitute_affine: lambda degree exceeds 3");
    Exponents ex(e.begin(), e.end() - 1);
    out.c[k].add_term(std::move(ex), c);
  }
  return out;
}

FiberCubic fiber_cubic(const Surface& f, Chart chart) { return substitute_affine(f, symbolic_fiber_map(chart)); }

GaussPoly fiber_discriminant(const Surface& f, Chart chart) {
  FiberCubic fc = fiber_cubic(f, chart);
  return cubic_discriminant(fc.c[3], fc.c[2], fc.c[1], fc.c[0]);
}

LocusPolys split_real_imag(const GaussPoly& delta) {
  LocusPolys out{IntPoly(delta.vars()), IntPoly(delta.vars())};
  for (const auto& [e, c] : delta.terms()) {
    if (c.real().get_den() != 1 || c.imag().get_den() != 1) {
      throw std::domain_error("discriminant has non-integral coefficients; Gaussian-integer input required");
    }
    out.P.add_term(e, c.real().get_num());
    out.Q.add_term(e, c.imag().get_num());
  }
  return out;
}

LocusPolys discriminant_locus_polys(const Surface& f) {
  for (const auto& [e, c] : f.poly().terms()) {
    if (c.real().get_den() != 1 || c.imag().get_den() != 1) {
      throw std::domain_error("surface coefficients must be Gaussian integers");
    }
  }
  return split_real_imag(fiber_discriminant(f, Chart::Standard));
}

IntPoly invert_chart(const IntPoly& p, std::optional<int> degree_bound) {
  if (p.num_vars() != 4) throw std::invalid_argument("invert_chart: expects four variables");
  const int deg = std::max(p.total_degree(), 0);
  const int m = degree_bound.value_or(deg);
  if (m < deg) throw std::invalid_argument("invert_chart: degree bound below polynomial degree");

  IntPoly norm2(p.vars());
  for (std::size_t k = 0; k < 4; ++k) {
    Exponents e(4, 0);
    e[k] = 2;
    norm2.add_term(e, 1);
  }
  std::vector<IntPoly> norm_powers{IntPoly::constant(p.vars(), 1)};
  for (int j = 1; j <= m; ++j) norm_powers.push_back(norm_powers.back() * norm2);

  IntPoly out(p.vars());
  for (const auto& [e, c] : p.terms()) {
    const int d = total_degree(e);
    const bool odd = ((e[1] + e[2] + e[3]) % 2) != 0;
    IntPoly term = IntPoly::monomial(p.vars(), e, odd ? Integer(-c) : c);
    out += term * norm_powers[m - d];
  }
  return out;
}

}  // namespace twistor
