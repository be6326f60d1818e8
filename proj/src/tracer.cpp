#include "twistor/tracer.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace twistor {

namespace {

using Vec4 = Eigen::Vector4d;
using Vec3 = Eigen::Vector3d;

// Hash grid over 4-vectors; stores polyline segments for nearest queries.
class SegmentIndex {
 public:
  explicit SegmentIndex(double cell) : cell_(cell) {}

  void add_polyline(const std::vector<Vec4>& pts, bool closed) {
    const std::size_t n = pts.size();
    if (n == 1) add_segment(pts[0], pts[0]);
    for (std::size_t i = 0; i + 1 < n; ++i) add_segment(pts[i], pts[i + 1]);
    if (closed && n > 2) add_segment(pts[n - 1], pts[0]);
  }

  /// Distance from p to the nearest stored segment, or +inf if none within
  /// roughly one cell.
  double distance(const Vec4& p) const {
    double best = std::numeric_limits<double>::infinity();
    Key k = key(p);
    for (int d0 = -1; d0 <= 1; ++d0)
      for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2)
          for (int d3 = -1; d3 <= 1; ++d3) {
            auto it = cells_.find(hash({k[0] + d0, k[1] + d1, k[2] + d2, k[3] + d3}));
            if (it == cells_.end()) continue;
            for (std::size_t s : it->second) best = std::min(best, segment_distance(p, segs_[s].first, segs_[s].second));
          }
    return best;
  }

 private:
  using Key = std::array<long, 4>;

  Key key(const Vec4& p) const {
    Key k;
    for (int i = 0; i < 4; ++i) k[i] = static_cast<long>(std::floor(p[i] / cell_));
    return k;
  }

  static std::size_t hash(const Key& k) {
    std::size_t h = 1469598103934665603ULL;
    for (long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
    return h;
  }

  void add_segment(const Vec4& a, const Vec4& b) {
    const std::size_t id = segs_.size();
    segs_.emplace_back(a, b);
    // Segments are short compared with the cell, so registering both end
    // cells and the midpoint cell is enough.
    std::array<Key, 3> ks{key(a), key(b), key(0.5 * (a + b))};
    std::sort(ks.begin(), ks.end());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (i > 0 && ks[i] == ks[i - 1]) continue;
      cells_[hash(ks[i])].push_back(id);
    }
  }

  double cell_;
  std::vector<std::pair<Vec4, Vec4>> segs_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> cells_;

 public:
  static double segment_distance(const Vec4& p, const Vec4& a, const Vec4& b) {
    Vec4 ab = b - a;
    double l2 = ab.squaredNorm();
    double s = l2 > 0 ? std::clamp((p - a).dot(ab) / l2, 0.0, 1.0) : 0.0;
    return (p - (a + s * ab)).norm();
  }
};

double segment_distance3(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double l2 = ab.squaredNorm();
  double s = l2 > 0 ? std::clamp((p - a).dot(ab) / l2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

// Min-norm solution of J dv = -F with rows scaled to unit length.
Vec4 min_norm_step(const SliceEquations::Jacobian& J, const Vec3& F) {
  SliceEquations::Jacobian Jn = J;
  Vec3 Fn = F;
  for (int r = 0; r < 3; ++r) {
    double n = J.row(r).norm();
    if (n > 0) {
      Jn.row(r) /= n;
      Fn[r] /= n;
    }
  }
  return Jn.completeOrthogonalDecomposition().solve(-Fn);
}

Vec4 cofactor_kernel(const SliceEquations::Jacobian& J) {
  Vec4 k;
  for (int c = 0; c < 4; ++c) {
    Eigen::Matrix3d m;
    int col = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == c) continue;
      m.col(col++) = J.col(j);
    }
    k[c] = ((c % 2) == 0 ? 1.0 : -1.0) * m.determinant();
  }
  return k;
}

struct ChartStops {
  std::vector<Vec4> points;
  std::vector<int> labels;
  /// Every known singular point in chart coordinates, on this slice or not.
  std::vector<Vec4> all;
};

ChartStops chart_stops(const SliceEquations& eq, const TraceConfig& cfg) {
  ChartStops s;
  for (const auto& x : cfg.stop_points) {
    if (eq.chart() == Chart::Inverted && x.squaredNorm() == 0.0) continue;
    s.all.push_back(eq.from_x(x));
  }
  if (cfg.stop_at_infinity && eq.chart() == Chart::Inverted) s.all.push_back(Vec4::Zero());
  for (std::size_t i = 0; i < cfg.stop_points.size(); ++i) {
    const Vec4& x = cfg.stop_points[i];
    // Finite stop points matter only on their own slice.
    if (std::abs(x[3] - eq.time()) > 1e-9) continue;
    if (eq.chart() == Chart::Inverted && x.squaredNorm() == 0.0) continue;
    s.points.push_back(eq.from_x(x));
    s.labels.push_back(static_cast<int>(i));
  }
  if (cfg.stop_at_infinity && eq.chart() == Chart::Inverted) {
    s.points.push_back(Vec4::Zero());
    s.labels.push_back(-2);
  }
  return s;
}

bool in_domain(const Vec4& v, const TraceConfig& cfg) {
  for (int i = 0; i < 3; ++i) {
    if (v[i] < cfg.box_min[i] || v[i] > cfg.box_max[i]) return false;
  }
  return cfg.radius_limit <= 0 || v.norm() <= cfg.radius_limit;
}

// Lands on the domain boundary between an inside point a and an outside
// point b, both on the curve.
std::optional<Vec4> land_on_boundary(const SliceEquations& eq, const Vec4& a, const Vec4& b, const TraceConfig& cfg,
                                     Termination& reason) {
  // Pick the violated constraint with the largest excess.
  std::function<double(const Vec4&, Vec4*)> g;
  double worst = 0;
  reason = Termination::BoxExit;
  for (int i = 0; i < 3; ++i) {
    if (b[i] > cfg.box_max[i] && b[i] - cfg.box_max[i] > worst) {
      worst = b[i] - cfg.box_max[i];
      const double bound = cfg.box_max[i];
      g = [i, bound](const Vec4& v, Vec4* grad) {
        if (grad) *grad = Vec4::Unit(i);
        return v[i] - bound;
      };
    }
    if (b[i] < cfg.box_min[i] && cfg.box_min[i] - b[i] > worst) {
      worst = cfg.box_min[i] - b[i];
      const double bound = cfg.box_min[i];
      g = [i, bound](const Vec4& v, Vec4* grad) {
        if (grad) *grad = Vec4::Unit(i);
        return v[i] - bound;
      };
    }
  }
  if (cfg.radius_limit > 0 && b.norm() > cfg.radius_limit && b.norm() - cfg.radius_limit > worst) {
    reason = Termination::RadiusExit;
    const double r2 = cfg.radius_limit * cfg.radius_limit;
    g = [r2](const Vec4& v, Vec4* grad) {
      if (grad) *grad = 2.0 * v;
      return v.squaredNorm() - r2;
    };
  }
  if (!g) return std::nullopt;

  const double ga = g(a, nullptr), gb = g(b, nullptr);
  Vec4 v = a + (ga / (ga - gb)) * (b - a);
  for (int it = 0; it < 40; ++it) {
    SliceEquations::Jacobian J;
    Vec3 F = eq(v, &J);
    Eigen::Matrix4d M;
    Vec4 rhs;
    for (int r = 0; r < 3; ++r) {
      double n = J.row(r).norm();
      if (n == 0) n = 1;
      M.row(r) = J.row(r) / n;
      rhs[r] = -F[r] / n;
    }
    Vec4 grad;
    double gv = g(v, &grad);
    M.row(3) = grad.transpose() / grad.norm();
    rhs[3] = -gv / grad.norm();
    Vec4 dv = M.colPivHouseholderQr().solve(rhs);
    v += dv;
    if (!v.allFinite()) return std::nullopt;
    if (dv.norm() < 1e-14 * (1 + v.norm())) break;
  }
  if ((v - a).norm() > 2 * (b - a).norm() + 1e-9) return std::nullopt;
  return v;
}

// Orthonormal basis of span(grad P, grad Q) in R^4: the normal plane of the
// locus surface. Empty when the two gradients are (nearly) dependent.
std::optional<Eigen::Matrix<double, 4, 2>> surface_normal_plane(const SliceEquations::Jacobian& normalized) {
  const Eigen::Matrix<double, 4, 2> A = normalized.topRows<2>().transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(A, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  if (!(sv[1] > 1e-6 * sv[0])) return std::nullopt;
  return Eigen::Matrix<double, 4, 2>(svd.matrixU().leftCols<2>());
}

// Cosine of the largest principal angle between two normal planes.
double plane_alignment(const Eigen::Matrix<double, 4, 2>& a, const Eigen::Matrix<double, 4, 2>& b) {
  const Eigen::Matrix2d m = a.transpose() * b;
  return Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()[1];
}

struct March {
  std::vector<Vec4> pts;
  std::vector<std::size_t> singular;
  CurveEnd end;
  bool closed = false;
  double max_residual = 0;
};

March march(const SliceEquations& eq, const Vec4& seed, Vec4 tau, const TraceConfig& cfg, const ChartStops& stops) {
  March m;
  m.pts.push_back(seed);
  m.max_residual = eq.residual(seed);

  double h = cfg.predictor_step;
  double arc = 0;
  // Near a singular point several branches pass within a few multiples of
  // its distance; closure must be much tighter than that.
  double seed_near = std::numeric_limits<double>::infinity();
  for (const auto& sp : stops.all) seed_near = std::min(seed_near, (seed - sp).norm());
  const double closure = std::min(cfg.closure_distance, 0.1 * seed_near);
  Vec4 v = seed;
  const JacobianInfo info0 = analyze_jacobian(eq, seed);
  int orient = info0.kernel.dot(tau) >= 0 ? 1 : -1;
  auto normal = surface_normal_plane(info0.normalized);

  while (true) {
    if (m.pts.size() >= cfg.max_points) {
      m.end.reason = Termination::PointLimit;
      return m;
    }
    if (h < cfg.min_step) {
      m.end.reason = Termination::StepUnderflow;
      m.end.singular_point = refine_singular_point(eq, v);
      return m;
    }
    // Near a singular point of the locus, features shrink with the distance
    // to it; so must the step.
    double near = std::numeric_limits<double>::infinity();
    for (const auto& sp : stops.all) near = std::min(near, (v - sp).norm());
    h = std::min(h, std::max(0.25 * near, cfg.min_step));
    Vec4 pred = v + h * tau;
    auto corr = correct_onto_slice(eq, pred, cfg.corrector_tolerance, 12, 0.5 * h);
    if (!corr) {
      h *= 0.5;
      continue;
    }
    JacobianInfo info = analyze_jacobian(eq, *corr);
    const double kn = info.kernel.norm();
    if (!(kn > 0)) {
      h *= 0.5;
      continue;
    }
    Vec4 tnew = info.kernel / kn;
    int s = tnew.dot(tau) >= 0 ? 1 : -1;
    tnew *= s;
    const Vec4 chord = *corr - v;
    const double cl = chord.norm();
    if (tnew.dot(tau) < 0.85 || (cl > 0 && chord.dot(tau) < 0.85 * cl)) {
      h *= 0.5;
      continue;
    }
    // Where two sheets of the locus pass close to each other the slice
    // curves can be nearly parallel; the surface normal plane tells the
    // sheets apart.
    auto normal_new = surface_normal_plane(info.normalized);
    if (normal && normal_new && plane_alignment(*normal, *normal_new) < 0.85) {
      h *= 0.5;
      continue;
    }

    // Domain exit.
    if (!in_domain(*corr, cfg)) {
      Termination why;
      auto b = land_on_boundary(eq, v, *corr, cfg, why);
      m.end.reason = why;
      if (b) {
        m.pts.push_back(*b);
        m.max_residual = std::max(m.max_residual, eq.residual(*b));
      }
      return m;
    }

    // Known singular points.
    for (std::size_t i = 0; i < stops.points.size(); ++i) {
      if (SegmentIndex::segment_distance(stops.points[i], v, *corr) < cfg.stop_radius) {
        m.pts.push_back(*corr);
        m.max_residual = std::max(m.max_residual, eq.residual(*corr));
        m.end.reason = Termination::StopPoint;
        m.end.stop_index = stops.labels[i];
        return m;
      }
    }

    // Orientation flip of the raw kernel: a crossing lies in between.
    int o = info.kernel.dot(tnew) >= 0 ? 1 : -1;
    if (o != orient) {
      auto sp = refine_singular_point(eq, 0.5 * (v + *corr));
      if (!sp || SegmentIndex::segment_distance(*sp, v, *corr) >= std::max(2 * cl, 1e-6)) {
        // No crossing on this slice: the step jumped across the gap of a
        // nearby saddle onto another branch.
        h *= 0.5;
        continue;
      }
      m.pts.push_back(*sp);
      m.singular.push_back(m.pts.size() - 1);
      m.end.singular_point = sp;
      m.max_residual = std::max(m.max_residual, eq.residual(m.pts.back()));
      m.end.reason = Termination::Bifurcation;
      return m;
    }

    arc += cl;
    // Back at the seed; the arc-length condition rules out the first steps.
    const double back = SegmentIndex::segment_distance(seed, v, *corr);
    if (m.pts.size() > 8 && back < std::min(closure, 0.25 * arc)) {
      m.closed = true;
      m.end.reason = Termination::Closed;
      return m;
    }

    m.pts.push_back(*corr);
    m.max_residual = std::max(m.max_residual, eq.residual(*corr));
    if (info.sigma_min < cfg.singularity_threshold) m.singular.push_back(m.pts.size() - 1);
    v = *corr;
    tau = tnew;
    normal = normal_new;
    h = std::min(h * 1.5, cfg.max_step);
  }
}

}  // namespace

namespace {

// P(c + y) as a polynomial in y, exact over Q(sqrt 3).
Sqrt3Poly recentre(const IntPoly& p, const S4PointQ& c) {
  const auto& vars = p.vars();
  std::vector<Sqrt3Poly> images;
  for (std::size_t k = 0; k < 4; ++k) {
    Sqrt3Poly img = Sqrt3Poly::variable(vars, k);
    img += Sqrt3Poly::constant(vars, QiSqrt3(c.coords()[static_cast<int>(k)]));
    images.push_back(std::move(img));
  }
  return p.compose<QiSqrt3>(images, [](const Integer& v) { return QiSqrt3(QSqrt3(Rational(v))); });
}

bool is_origin(const S4PointQ& c) {
  if (c.is_infinity()) return false;
  for (int k = 0; k < 4; ++k) {
    if (!c.coords()[k].is_zero()) return false;
  }
  return true;
}

}  // namespace

LocusSystem::LocusSystem(IntPoly P, IntPoly Q, const std::vector<S4PointQ>& centres, double local_radius)
    : P_(std::move(P)),
      Q_(std::move(Q)),
      P_inv_(invert_chart(P_)),
      Q_inv_(invert_chart(Q_)),
      nP_(P_),
      nQ_(Q_),
      nP_inv_(P_inv_),
      nQ_inv_(Q_inv_),
      local_radius_(local_radius) {
  // The origin of either chart needs no re-expansion.
  for (const auto& c : centres) {
    if (c.is_infinity() || is_origin(c)) continue;
    local_.push_back({to_double(c).coords(), RealNumericPoly(recentre(P_, c)), RealNumericPoly(recentre(Q_, c))});
    const S4PointQ ci = apply_generator(Generator::Iota, c);
    local_inv_.push_back(
        {to_double(ci).coords(), RealNumericPoly(recentre(P_inv_, ci)), RealNumericPoly(recentre(Q_inv_, ci))});
  }
}

Eigen::Vector2d LocusSystem::values(Chart c, const Vec4& v, Eigen::Matrix<double, 2, 4>* jac) const {
  const RealNumericPoly* p = c == Chart::Standard ? &nP_ : &nP_inv_;
  const RealNumericPoly* q = c == Chart::Standard ? &nQ_ : &nQ_inv_;
  Vec4 y = v;
  for (const auto& e : expansions(c)) {
    if ((v - e.centre).norm() < local_radius_) {
      p = &e.P;
      q = &e.Q;
      y = v - e.centre;
      break;
    }
  }
  Eigen::Vector2d out;
  if (jac) {
    RealNumericPoly::Gradient gp, gq;
    out[0] = p->value_and_gradient(y, gp);
    out[1] = q->value_and_gradient(y, gq);
    jac->row(0) = gp.transpose();
    jac->row(1) = gq.transpose();
  } else {
    out[0] = (*p)(y);
    out[1] = (*q)(y);
  }
  return out;
}

Vec4 invert_point(const Vec4& x) {
  const double n2 = x.squaredNorm();
  if (n2 == 0) throw std::domain_error("invert_point: origin maps to infinity");
  return Vec4(x[0], -x[1], -x[2], -x[3]) / n2;
}

Eigen::Matrix<double, 5, 1> sphere_embed(const std::optional<Vec4>& x) {
  Eigen::Matrix<double, 5, 1> s;
  if (!x) {
    s << 0, 0, 0, 0, 1;
    return s;
  }
  const double n2 = x->squaredNorm();
  s.head<4>() = 2.0 * *x / (n2 + 1.0);
  s[4] = (n2 - 1.0) / (n2 + 1.0);
  return s;
}

SliceEquations::SliceEquations(const LocusSystem& sys, Chart chart, double t) : sys_(&sys), chart_(chart), t_(t) {}

Vec3 SliceEquations::operator()(const Vec4& v, Jacobian* jac) const {
  Vec3 F;
  Eigen::Matrix<double, 2, 4> J2;
  F.head<2>() = sys_->values(chart_, v, jac ? &J2 : nullptr);
  if (jac) jac->topRows<2>() = J2;
  if (chart_ == Chart::Standard) {
    F[2] = v[3] - t_;
    if (jac) jac->row(2) = Vec4::Unit(3).transpose();
  } else {
    F[2] = t_ * v.squaredNorm() + v[3];
    if (jac) jac->row(2) = (2.0 * t_ * v + Vec4::Unit(3)).transpose();
  }
  return F;
}

double SliceEquations::residual(const Vec4& v) const {
  return sys_->values(chart_, v).cwiseAbs().sum();
}

Vec4 SliceEquations::to_x(const Vec4& v) const { return chart_ == Chart::Standard ? v : invert_point(v); }
Vec4 SliceEquations::from_x(const Vec4& x) const { return chart_ == Chart::Standard ? x : invert_point(x); }

std::optional<Vec4> SliceEquations::lift(const Vec3& s) const {
  if (chart_ == Chart::Standard) return Vec4(s[0], s[1], s[2], t_);
  const double disc = 1.0 - 4.0 * t_ * t_ * s.squaredNorm();
  if (disc < 0) return std::nullopt;
  // Root of t y4^2 + y4 + t |s|^2 = 0 that stays bounded as t -> 0.
  const double y4 = -2.0 * t_ * s.squaredNorm() / (1.0 + std::sqrt(disc));
  return Vec4(s[0], s[1], s[2], y4);
}

JacobianInfo analyze_jacobian(const SliceEquations& eq, const Vec4& v) {
  JacobianInfo info;
  SliceEquations::Jacobian J;
  info.residual = eq(v, &J);
  for (int r = 0; r < 3; ++r) {
    double n = J.row(r).norm();
    if (n > 0) J.row(r) /= n;
  }
  info.normalized = J;
  Eigen::JacobiSVD<SliceEquations::Jacobian> svd(J);
  info.sigma_min = svd.singularValues()[2];
  info.kernel = cofactor_kernel(J);
  return info;
}

void TraceConfig::validate() const {
  if (grid_resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  for (int i = 0; i < 3; ++i) {
    if (!(box_min[i] < box_max[i])) throw std::invalid_argument("empty trace box");
  }
  if (!(corrector_tolerance > 0)) throw std::invalid_argument("corrector tolerance must be positive");
  if (!(min_step > 0 && min_step <= predictor_step && predictor_step <= max_step)) {
    throw std::invalid_argument("step sizes must satisfy 0 < min <= predictor <= max");
  }
  if (!(closure_distance > 0)) throw std::invalid_argument("closure distance must be positive");
  if (!(singularity_threshold > 0)) throw std::invalid_argument("singularity threshold must be positive");
  if (radius_limit < 0) throw std::invalid_argument("radius limit must be non-negative");
  if (!(stop_radius > 0)) throw std::invalid_argument("stop radius must be positive");
  if (max_points < 2) throw std::invalid_argument("max points must be at least 2");
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::Closed: return "closed";
    case Termination::BoxExit: return "box_exit";
    case Termination::RadiusExit: return "radius_exit";
    case Termination::StopPoint: return "stop_point";
    case Termination::Bifurcation: return "bifurcation";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::PointLimit: return "point_limit";
  }
  return "unknown";
}

double SliceCurve::length() const {
  double L = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) L += (points[i + 1] - points[i]).norm();
  if (closed && points.size() > 2) L += (points.front() - points.back()).norm();
  return L;
}

std::optional<Vec4> correct_onto_slice(const SliceEquations& eq, Vec4 v, double tol, int max_iter, double max_move) {
  const Vec4 v0 = v;
  for (int it = 0; it < max_iter; ++it) {
    SliceEquations::Jacobian J;
    Vec3 F = eq(v, &J);
    Vec4 dv = min_norm_step(J, F);
    v += dv;
    if (!v.allFinite() || v.norm() > 1e6) return std::nullopt;
    if (max_move > 0 && (v - v0).norm() > max_move) return std::nullopt;
    if (dv.norm() <= 1e-13 * (1.0 + v.norm())) {
      return eq.residual(v) < tol ? std::optional<Vec4>(v) : std::nullopt;
    }
  }
  // Allow a final acceptance if the last steps were tiny anyway.
  SliceEquations::Jacobian J;
  Vec3 F = eq(v, &J);
  if (min_norm_step(J, F).norm() < 1e-10 && eq.residual(v) < tol && std::abs(F[2]) < 1e-12) return v;
  return std::nullopt;
}

std::optional<Vec4> refine_singular_point(const SliceEquations& eq, const Vec4& v0) {
  SliceEquations::Jacobian J0;
  eq(v0, &J0);
  Vec3 scale;
  for (int r = 0; r < 3; ++r) {
    double n = J0.row(r).norm();
    scale[r] = n > 1e-300 ? 1.0 / n : 1.0;
  }
  auto G = [&](const Vec4& v) {
    Eigen::Matrix<double, 7, 1> g;
    g.head<3>() = eq(v).cwiseProduct(scale);
    g.tail<4>() = analyze_jacobian(eq, v).kernel;
    return g;
  };
  Vec4 v = v0;
  for (int it = 0; it < 60; ++it) {
    Eigen::Matrix<double, 7, 1> g = G(v);
    Eigen::Matrix<double, 7, 4> M;
    for (int c = 0; c < 4; ++c) {
      const double hstep = 1e-7 * (1.0 + std::abs(v[c]));
      Vec4 e = Vec4::Zero();
      e[c] = hstep;
      M.col(c) = (G(v + e) - G(v - e)) / (2 * hstep);
    }
    Vec4 dv = M.completeOrthogonalDecomposition().solve(-g);
    v += dv;
    if (!v.allFinite() || (v - v0).norm() > 0.5) return std::nullopt;
    if (dv.norm() < 1e-13 * (1.0 + v.norm())) break;
  }
  const auto info = analyze_jacobian(eq, v);
  if (info.residual.cwiseProduct(scale).norm() > 1e-9 || info.sigma_min > 1e-6) return std::nullopt;
  return v;
}

std::vector<Vec4> find_seeds_chart(const LocusSystem& sys, double t, const TraceConfig& cfg) {
  cfg.validate();
  const SliceEquations eq(sys, cfg.chart, t);
  const ChartStops stops = chart_stops(eq, cfg);
  const int n = cfg.grid_resolution;
  const Vec3 spacing = (cfg.box_max - cfg.box_min) / (n - 1);
  const double reach = spacing.maxCoeff();

  std::vector<Vec4> seeds;
  SegmentIndex taken(std::max(cfg.predictor_step, 1e-6));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Vec3 s = cfg.box_min + Vec3(i * spacing[0], j * spacing[1], k * spacing[2]);
        auto lifted = eq.lift(s);
        if (!lifted) continue;
        SliceEquations::Jacobian J;
        Vec3 F = eq(*lifted, &J);
        if (min_norm_step(J, F).norm() > reach) continue;
        auto v = correct_onto_slice(eq, *lifted, cfg.corrector_tolerance, 30, 2 * reach);
        if (!v || !in_domain(*v, cfg)) continue;
        bool near_stop = false;
        for (const auto& sp : stops.points) near_stop |= (*v - sp).norm() < 2 * cfg.stop_radius;
        if (near_stop) continue;
        if (analyze_jacobian(eq, *v).sigma_min <= cfg.singularity_threshold) continue;
        if (taken.distance(*v) < cfg.predictor_step) continue;
        taken.add_polyline({*v}, false);
        seeds.push_back(*v);
      }
    }
  }
  std::sort(seeds.begin(), seeds.end(), [](const Vec4& a, const Vec4& b) {
    return std::lexicographical_compare(a.data(), a.data() + 4, b.data(), b.data() + 4);
  });
  return seeds;
}

std::vector<Vec3> find_seeds(const LocusSystem& sys, double t, const TraceConfig& cfg) {
  const SliceEquations eq(sys, cfg.chart, t);
  std::vector<Vec3> out;
  for (const auto& v : find_seeds_chart(sys, t, cfg)) out.push_back(eq.to_x(v).head<3>());
  return out;
}

SliceCurve trace_curve_chart(const LocusSystem& sys, const Vec4& seed, double t, const TraceConfig& cfg) {
  cfg.validate();
  const SliceEquations eq(sys, cfg.chart, t);
  SliceCurve curve;
  curve.t = t;
  curve.chart = cfg.chart;

  auto start = correct_onto_slice(eq, seed, cfg.corrector_tolerance);
  if (!start) {
    curve.diagnostic = "seed did not converge onto the slice";
    return curve;
  }
  const JacobianInfo info = analyze_jacobian(eq, *start);
  if (!(info.kernel.norm() > 0)) {
    curve.diagnostic = "seed is a singular point";
    curve.chart_points.push_back(*start);
  } else {
    Vec4 tau = info.kernel.normalized();
    // Orientation: first step along +e1, ties broken by e2, then e3.
    for (int axis = 0; axis < 4; ++axis) {
      if (std::abs(tau[axis]) > 1e-12) {
        if (tau[axis] < 0) tau = -tau;
        break;
      }
    }
    const ChartStops stops = chart_stops(eq, cfg);
    March fwd = march(eq, *start, tau, cfg, stops);
    if (fwd.closed) {
      curve.closed = true;
      curve.chart_points = std::move(fwd.pts);
      curve.singular_indices = std::move(fwd.singular);
      curve.start = curve.end = fwd.end;
      curve.max_residual = fwd.max_residual;
    } else {
      March bwd = march(eq, *start, -tau, cfg, stops);
      const std::size_t nb = bwd.pts.size();
      for (std::size_t i = nb; i-- > 1;) curve.chart_points.push_back(bwd.pts[i]);
      for (std::size_t s : bwd.singular) curve.singular_indices.push_back(nb - 1 - s);
      for (auto& p : fwd.pts) curve.chart_points.push_back(p);
      for (std::size_t s : fwd.singular) curve.singular_indices.push_back(nb - 1 + s);
      std::sort(curve.singular_indices.begin(), curve.singular_indices.end());
      curve.start = bwd.end;
      curve.end = fwd.end;
      curve.max_residual = std::max(fwd.max_residual, bwd.max_residual);
    }
  }
  for (const auto& v : curve.chart_points) curve.points.push_back(eq.to_x(v).head<3>());
  return curve;
}

SliceCurve trace_curve(const LocusSystem& sys, const Vec3& seed, double t, const TraceConfig& cfg) {
  const SliceEquations eq(sys, cfg.chart, t);
  return trace_curve_chart(sys, eq.from_x(Vec4(seed[0], seed[1], seed[2], t)), t, cfg);
}

std::vector<SliceCurve> slice(const LocusSystem& sys, double t, const TraceConfig& cfg,
                              const std::vector<Vec4>& extra_seeds) {
  cfg.validate();
  std::vector<Vec4> seeds = extra_seeds;
  const auto grid = find_seeds_chart(sys, t, cfg);
  seeds.insert(seeds.end(), grid.begin(), grid.end());

  const double cover = 0.2 * cfg.predictor_step;
  SegmentIndex traced(std::max(cfg.max_step, cfg.closure_distance));
  std::vector<SliceCurve> curves;
  for (const auto& s : seeds) {
    if (traced.distance(s) < cover) continue;
    SliceCurve c = trace_curve_chart(sys, s, t, cfg);
    if (c.chart_points.size() < 2) continue;
    if (traced.distance(c.chart_points[c.chart_points.size() / 2]) < cover) continue;
    traced.add_polyline(c.chart_points, c.closed);
    curves.push_back(std::move(c));
  }

  // Drop curves that run along an earlier curve for their whole length.
  std::vector<SliceCurve> out;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    bool duplicate = false;
    for (const auto& kept : out) {
      SegmentIndex idx(std::max(cfg.max_step, cfg.closure_distance));
      idx.add_polyline(kept.chart_points, kept.closed);
      bool all_near = std::all_of(curves[i].chart_points.begin(), curves[i].chart_points.end(),
                                  [&](const Vec4& p) { return idx.distance(p) < cfg.closure_distance; });
      if (!all_near) continue;
      SegmentIndex back(std::max(cfg.max_step, cfg.closure_distance));
      back.add_polyline(curves[i].chart_points, curves[i].closed);
      duplicate = std::all_of(kept.chart_points.begin(), kept.chart_points.end(),
                              [&](const Vec4& p) { return back.distance(p) < cfg.closure_distance; });
      if (duplicate) break;
    }
    if (!duplicate) out.push_back(std::move(curves[i]));
  }
  return out;
}

std::vector<SliceCurve> slice(const IntPoly& P, const IntPoly& Q, double t, const TraceConfig& cfg) {
  LocusSystem sys(P, Q);
  return slice(sys, t, cfg);
}

double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
    double worst = 0;
    for (const auto& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : q) best = std::min(best, (x - y).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

double directed_distance_to_polylines(const std::vector<Vec3>& a, const std::vector<std::vector<Vec3>>& b) {
  double worst = 0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& line : b) {
      if (line.size() == 1) best = std::min(best, (p - line[0]).norm());
      for (std::size_t i = 0; i + 1 < line.size(); ++i) best = std::min(best, segment_distance3(p, line[i], line[i + 1]));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace twistor
