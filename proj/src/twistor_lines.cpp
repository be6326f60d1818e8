#include "twistor/twistor_lines.hpp"

#include "twistor/numeric_poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace twistor {

namespace {

using Vec4 = Eigen::Vector4d;
using CVec4 = Eigen::Matrix<std::complex<double>, 4, 1>;

std::complex<double> to_complex(const GaussRational& c) { return RingTraits<GaussRational>::to_complex(c); }

// Eight real equations (Re c_k, Im c_k) in one chart.
class FiberEquations {
 public:
  FiberEquations(const Surface& f, Chart chart) {
    FiberCubic fc = fiber_cubic(f, chart);
    for (int k = 0; k < 4; ++k) c_[k] = ComplexNumericPoly(fc.c[k]);
  }

  Eigen::Matrix<double, 8, 1> operator()(const Vec4& x, Eigen::Matrix<double, 8, 4>* jac = nullptr) const {
    Eigen::Matrix<double, 8, 1> r;
    for (int k = 0; k < 4; ++k) {
      ComplexNumericPoly::Gradient g;
      std::complex<double> v = jac ? c_[k].value_and_gradient(x, g) : c_[k](x);
      r[k] = v.real();
      r[k + 4] = v.imag();
      if (jac) {
        jac->row(k) = g.real().transpose();
        jac->row(k + 4) = g.imag().transpose();
      }
    }
    return r;
  }

 private:
  std::array<ComplexNumericPoly, 4> c_;
};

std::optional<Vec4> gauss_newton(const FiberEquations& eq, Vec4 x, const FiberSearchConfig& cfg) {
  for (int it = 0; it < cfg.max_iterations; ++it) {
    Eigen::Matrix<double, 8, 4> J;
    auto r = eq(x, &J);
    Vec4 dx = J.completeOrthogonalDecomposition().solve(-r);
    x += dx;
    if (!x.allFinite() || x.norm() > 1e6) return std::nullopt;
    if (dx.norm() < 1e-15 * (1.0 + x.norm())) break;
  }
  if (eq(x).norm() > cfg.tolerance) return std::nullopt;
  return x;
}

Eigen::Matrix<double, 5, 1> chordal(const S4Pointd& p) {
  Eigen::Matrix<double, 5, 1> s;
  if (p.is_infinity()) {
    s << 0, 0, 0, 0, 1;
    return s;
  }
  const double n2 = p.coords().squaredNorm();
  s.head<4>() = 2.0 * p.coords() / (n2 + 1.0);
  s[4] = (n2 - 1.0) / (n2 + 1.0);
  return s;
}

std::vector<Rational> small_rationals(int height) {
  std::set<Rational> s;
  for (int q = 1; q <= height; ++q) {
    for (int p = -height; p <= height; ++p) {
      Rational r(p, q);
      r.canonicalize();
      s.insert(r);
    }
  }
  std::vector<Rational> v(s.begin(), s.end());
  // Lowest height first so that the simplest representation wins.
  std::stable_sort(v.begin(), v.end(), [](const Rational& a, const Rational& b) {
    auto h = [](const Rational& r) { return std::max(Integer(abs(r.get_num())), Integer(r.get_den())); };
    return h(a) < h(b);
  });
  return v;
}

}  // namespace

std::size_t TwistorFiberSet::certified_count() const {
  return static_cast<std::size_t>(std::count_if(fibers.begin(), fibers.end(), [](const auto& f) { return f.certified; }));
}

std::vector<S4Pointd> TwistorFiberSet::certified_points() const {
  std::vector<S4Pointd> out;
  for (const auto& f : fibers) {
    if (f.certified) out.push_back(f.point);
  }
  return out;
}

std::optional<CVec4> find_singular_point(const Surface& f, int starts, std::uint64_t seed) {
  using C = std::complex<double>;
  std::array<GaussPoly, 4> grad;
  std::array<std::array<GaussPoly, 4>, 4> hess;
  for (int k = 0; k < 4; ++k) grad[k] = f.poly().derivative(k);
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) hess[k][l] = grad[k].derivative(l);
  }
  auto eval = [](const GaussPoly& p, const CVec4& z) {
    std::array<C, 4> pt{z[0], z[1], z[2], z[3]};
    return p.evaluate<C>(std::span<const C>(pt), [](const GaussRational& c) { return to_complex(c); });
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vec = [&] {
    CVec4 v;
    for (int k = 0; k < 4; ++k) v[k] = C(gauss(rng), gauss(rng));
    return v;
  };
  for (int s = 0; s < starts; ++s) {
    CVec4 a = random_vec().normalized();
    CVec4 z = random_vec();
    z /= a.dot(z);  // a^H z = 1
    for (int it = 0; it < 60; ++it) {
      Eigen::Matrix<C, 5, 4> J;
      Eigen::Matrix<C, 5, 1> r;
      for (int k = 0; k < 4; ++k) {
        r[k] = eval(grad[k], z);
        for (int l = 0; l < 4; ++l) J(k, l) = eval(hess[k][l], z);
      }
      r[4] = a.dot(z) - 1.0;
      J.row(4) = a.adjoint();
      CVec4 dz = J.completeOrthogonalDecomposition().solve(-r);
      z += dz;
      if (!z.allFinite()) break;
      if (dz.norm() < 1e-14 * (1.0 + z.norm())) break;
    }
    if (!z.allFinite()) continue;
    CVec4 u = z.normalized();
    double g = 0;
    for (int k = 0; k < 4; ++k) g = std::max(g, std::abs(eval(grad[k], u)));
    if (g < 1e-10) return u;
  }
  return std::nullopt;
}

bool fiber_contained_exact(const Surface& f, const S4PointQ& x) {
  const FiberMap<QiSqrt3> line = x.is_infinity() ? infinity_fiber<QiSqrt3>() : fiber_map<QiSqrt3>(x);
  // f(theta(lambda)) has degree <= deg f in lambda; it vanishes identically
  // iff it vanishes at deg f + 1 distinct values.
  const int d = std::max(f.degree(), 0);
  for (int l = 0; l <= d; ++l) {
    auto z = line(QiSqrt3(l));
    std::array<QiSqrt3, 4> pt{z[0], z[1], z[2], z[3]};
    QiSqrt3 v = f.poly().evaluate<QiSqrt3>(std::span<const QiSqrt3>(pt), [](const GaussRational& c) { return to_qisqrt3(c); });
    if (!v.is_zero()) return false;
  }
  return true;
}

std::optional<QSqrt3> snap_to_qsqrt3(double value, int height, double tol) {
  static thread_local int cached_height = -1;
  static thread_local std::vector<Rational> cache;
  if (cached_height != height) {
    cache = small_rationals(height);
    cached_height = height;
  }
  const double s3 = std::sqrt(3.0);
  for (const Rational& b : cache) {
    const double target = value - b.get_d() * s3;
    for (int q = 1; q <= height; ++q) {
      const double p = std::round(target * q);
      if (std::abs(p) > height) continue;
      Rational a(static_cast<long>(p), q);
      a.canonicalize();
      QSqrt3 cand(a, b);
      if (std::abs(cand.to_double() - value) <= tol) return cand;
    }
  }
  return std::nullopt;
}

TwistorFiberSet find_twistor_fibers(const Surface& f, const FiberSearchConfig& cfg) {
  if (f.degree() != 3) throw std::invalid_argument("find_twistor_fibers: cubic surface required");
  if (cfg.grid_per_axis < 2) throw std::invalid_argument("find_twistor_fibers: grid needs at least 2 points per axis");
  if (auto w = find_singular_point(f, cfg.smoothness_starts, cfg.seed)) {
    throw std::invalid_argument("find_twistor_fibers: surface appears singular (grad f vanishes at a sampled point)");
  }

  struct Solution {
    S4Pointd point;
    Chart chart;
    Vec4 chart_coords;
    double residual;
  };
  std::vector<Solution> sols;
  const int n = cfg.grid_per_axis;
  const double h = 2.0 * cfg.half_width / (n - 1);
  for (Chart chart : {Chart::Standard, Chart::Inverted}) {
    FiberEquations eq(f, chart);
    Vec4 x;
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
          for (int i3 = 0; i3 < n; ++i3) {
            x << -cfg.half_width + i0 * h, -cfg.half_width + i1 * h, -cfg.half_width + i2 * h,
                -cfg.half_width + i3 * h;
            Eigen::Matrix<double, 8, 4> J;
            auto r = eq(x, &J);
            // Only start where the Newton step stays within about one cell.
            if (J.completeOrthogonalDecomposition().solve(r).norm() > 2.0 * h) continue;
            auto sol = gauss_newton(eq, x, cfg);
            if (!sol) continue;
            S4Pointd p;
            if (chart == Chart::Standard) {
              p = S4Pointd(*sol);
            } else if (sol->norm() < 1e-10) {
              p = S4Pointd::infinity();
            } else {
              const double n2 = sol->squaredNorm();
              p = S4Pointd((*sol)[0] / n2, -(*sol)[1] / n2, -(*sol)[2] / n2, -(*sol)[3] / n2);
            }
            sols.push_back({p, chart, *sol, eq(*sol).norm()});
          }
  }

  // Cluster on the sphere; keep the best-residual representative.
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < sols.size(); ++i) {
    bool placed = false;
    for (auto& c : clusters) {
      if ((chordal(sols[c.front()].point) - chordal(sols[i].point)).norm() < cfg.cluster_radius) {
        c.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({i});
  }

  TwistorFiberSet out;
  for (const auto& c : clusters) {
    const Solution& best =
        sols[*std::min_element(c.begin(), c.end(), [&](auto a, auto b) { return sols[a].residual < sols[b].residual; })];
    TwistorFiber fib;
    fib.point = best.point;
    fib.residual = best.residual;
    if (best.point.is_infinity()) {
      fib.exact = S4PointQ::infinity();
      fib.snap_error = best.chart_coords.norm();
    } else {
      S4PointQ::Vector v;
      bool ok = true;
      double err = 0;
      for (int k = 0; k < 4 && ok; ++k) {
        auto s = snap_to_qsqrt3(best.point[k], cfg.snap_height, cfg.snap_tolerance);
        if (!s) {
          ok = false;
          break;
        }
        v[k] = *s;
        err = std::max(err, std::abs(s->to_double() - best.point[k]));
      }
      if (ok) {
        fib.exact = S4PointQ(v);
        fib.snap_error = err;
      }
    }
    fib.certified = fib.exact && fib.snap_error <= cfg.snap_tolerance && fiber_contained_exact(f, *fib.exact);
    if (fib.certified) fib.point = to_double(*fib.exact);
    out.fibers.push_back(std::move(fib));
  }

  // Deterministic order: infinity last, otherwise lexicographic.
  std::sort(out.fibers.begin(), out.fibers.end(), [](const TwistorFiber& a, const TwistorFiber& b) {
    if (a.point.is_infinity() != b.point.is_infinity()) return b.point.is_infinity();
    if (a.point.is_infinity()) return false;
    const auto& x = a.point.coords();
    const auto& y = b.point.coords();
    return std::lexicographical_compare(x.data(), x.data() + 4, y.data(), y.data() + 4);
  });
  if (out.certified_count() > 5) {
    throw std::logic_error("find_twistor_fibers: more than five certified twistor fibers on a smooth cubic");
  }
  return out;
}

bool fiber_images_coplanar_or_cospherical(const std::vector<S4Pointd>& points, double tol) {
  if (points.size() <= 4) return true;
  Eigen::MatrixXd L(points.size(), 6);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Eigen::Matrix<double, 6, 1> row;
    if (points[i].is_infinity()) {
      row << 1, 0, 0, 0, 0, 0;
    } else {
      const auto& x = points[i].coords();
      row << x.squaredNorm(), x[0], x[1], x[2], x[3], 1.0;
    }
    L.row(static_cast<Eigen::Index>(i)) = row.normalized().transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) rank += s[k] > tol * s[0] ? 1 : 0;
  return rank <= 4;
}

std::complex<double> cross_ratio(const ExtComplex& p, const ExtComplex& q, const ExtComplex& r, const ExtComplex& s) {
  auto diff = [](const ExtComplex& a, const ExtComplex& b) -> std::optional<std::complex<double>> {
    if (a.infinite || b.infinite) return std::nullopt;  // factor cancels in the limit
    return a.z - b.z;
  };
  std::complex<double> num = 1.0, den = 1.0;
  if (auto d = diff(p, r)) num *= *d;
  if (auto d = diff(q, s)) num *= *d;
  if (auto d = diff(p, s)) den *= *d;
  if (auto d = diff(q, r)) den *= *d;
  return num / den;
}

bool concircular(const ExtComplex& p, const ExtComplex& q, const ExtComplex& r, const ExtComplex& s, double tol) {
  const std::array<const ExtComplex*, 4> pts{&p, &q, &r, &s};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const auto& a = *pts[i];
      const auto& b = *pts[j];
      if ((a.infinite && b.infinite) || (!a.infinite && !b.infinite && a.z == b.z)) {
        throw std::invalid_argument("concircular: coincident points");
      }
    }
  }
  const std::complex<double> cr = cross_ratio(p, q, r, s);
  return std::abs(cr.imag()) <= tol * std::max(1.0, std::abs(cr));
}

QiSqrt3 determinant(const ExactMatrix4& m) {
  ExactMatrix4 a = m;
  QiSqrt3 det(1);
  for (int col = 0; col < 4; ++col) {
    int pivot = -1;
    for (int r = col; r < 4; ++r) {
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return QiSqrt3(0);
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      det = -det;
    }
    det = det * a(col, col);
    const QiSqrt3 inv = a(col, col).inverse();
    for (int r = col + 1; r < 4; ++r) {
      if (a(r, col).is_zero()) continue;
      const QiSqrt3 factor = a(r, col) * inv;
      for (int c = col; c < 4; ++c) a(r, c) = a(r, c) - factor * a(col, c);
    }
  }
  return det;
}

EquivalenceVerdict verify_fermat_equivalence(const ExactMatrix4& m) {
  EquivalenceVerdict v;
  if (determinant(m).is_zero()) {
    v.singular = true;
    v.reason = "matrix is singular";
    return v;
  }
  const GaussPoly e_gauss = transformed_fermat_cubic().poly();
  const auto vars = e_gauss.vars();
  Sqrt3Poly target = e_gauss.map_coefficients<QiSqrt3>([](const GaussRational& c) { return to_qisqrt3(c); });

  Sqrt3Poly image(vars);
  for (int k = 0; k < 4; ++k) {
    Sqrt3Poly form(vars);
    for (int j = 0; j < 4; ++j) {
      Exponents e(4, 0);
      e[j] = 1;
      form.add_term(e, m(k, j));
    }
    image += form.pow(3);
  }

  // Read the scale off one term of the target, then compare everything.
  const auto& [e0, c0] = *target.terms().begin();
  const QiSqrt3 scale = image.coefficient(e0) / c0;
  if (scale.is_zero()) {
    v.reason = "image misses a term of the target polynomial";
    return v;
  }
  if (image != target * scale) {
    v.reason = "image is not a multiple of the target polynomial";
    return v;
  }
  v.equivalent = true;
  v.scale = scale;
  v.reason = "exact identity holds";
  return v;
}

FermatConstants fermat_constants() {
  FermatConstants k;
  k.a = QiSqrt3(QSqrt3(Rational(1, 2)), QSqrt3(Rational(0), Rational(1, 6)));
  k.b = k.a.conj();
  k.c = QiSqrt3(QSqrt3(0), QSqrt3(Rational(0), Rational(1, 3)));  // i / sqrt3 = i sqrt3 / 3
  return k;
}

ExactMatrix4 printed_fermat_matrix() {
  const auto k = fermat_constants();
  const QiSqrt3 z(0);
  ExactMatrix4 m;
  m << z, k.a, k.b, z,   //
      z, k.c, -k.b, z,   //
      k.a, z, z, k.b,    //
      z, k.c, -k.b, z;
  return m;
}

ExactMatrix4 corrected_fermat_matrix() {
  const auto k = fermat_constants();
  ExactMatrix4 m = printed_fermat_matrix();
  m.row(3) << k.c, QiSqrt3(0), QiSqrt3(0), -k.b;
  return m;
}

std::vector<TypoFix> search_fermat_typo_fixes() {
  const auto k = fermat_constants();
  const std::array<std::pair<QiSqrt3, std::string>, 6> consts{
      {{k.a, "a"}, {-k.a, "-a"}, {k.b, "b"}, {-k.b, "-b"}, {k.c, "c"}, {-k.c, "-c"}}};
  const ExactMatrix4 printed = printed_fermat_matrix();
  std::vector<TypoFix> out;
  for (int row : {1, 3}) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        for (const auto& [k1, n1] : consts) {
          for (const auto& [k2, n2] : consts) {
            ExactMatrix4 m = printed;
            for (int c = 0; c < 4; ++c) m(row, c) = QiSqrt3(0);
            m(row, i) = k1;
            m(row, j) = k2;
            if (!verify_fermat_equivalence(m).equivalent) continue;
            std::string sign2 = n2[0] == '-' ? " - " + n2.substr(1) : " + " + n2;
            out.push_back({row, "z" + std::to_string(row + 1) + "' = " + n1 + " x" + std::to_string(i + 1) + sign2 +
                                    " x" + std::to_string(j + 1),
                           m});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace twistor
