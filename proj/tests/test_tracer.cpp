#include "twistor/tracer.hpp"
#include "twistor/twistor_lines.hpp"

#include <doctest.h>

#include <cmath>

using namespace twistor;
using Eigen::Vector3d;
using Eigen::Vector4d;

namespace {

const auto X = default_vars(4, "x");

IntPoly v(int k) { return IntPoly::variable(X, k); }
IntPoly c(int n) { return IntPoly::constant(X, Integer(n)); }

const LocusPolys& flagship() {
  static const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  return lp;
}

const std::vector<S4PointQ>& flagship_points() {
  static const std::vector<S4PointQ> pts = [] {
    std::vector<S4PointQ> out;
    for (const auto& f : find_twistor_fibers(transformed_fermat_cubic()).fibers) out.push_back(*f.exact);
    return out;
  }();
  return pts;
}

const LocusSystem& flagship_system() {
  static const LocusSystem sys(flagship().P, flagship().Q, flagship_points());
  return sys;
}

double residual(const LocusSystem& sys, Chart chart, const Vector4d& p) {
  const Eigen::Vector2d r = sys.values(chart, p);
  return std::abs(r[0]) + std::abs(r[1]);
}

double residual(const LocusSystem& sys, const Vector3d& p, double t) {
  return residual(sys, Chart::Standard, Vector4d(p[0], p[1], p[2], t));
}

std::vector<Vector3d> all_points(const std::vector<SliceCurve>& curves) {
  std::vector<Vector3d> out;
  for (const auto& cv : curves) out.insert(out.end(), cv.points.begin(), cv.points.end());
  return out;
}

std::vector<std::vector<Vector3d>> polylines(const std::vector<SliceCurve>& curves) {
  std::vector<std::vector<Vector3d>> out;
  for (const auto& cv : curves) out.push_back(cv.points);
  return out;
}

}  // namespace

TEST_CASE("trace config validation") {
  TraceConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.min_step = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TraceConfig{};
  cfg.corrector_tolerance = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TraceConfig{};
  cfg.box_max[1] = cfg.box_min[1];
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("unit circle traces closed with the right length") {
  const LocusSystem sys(v(0) * v(0) + v(1) * v(1) - c(1), v(2));
  const SliceCurve cv = trace_curve(sys, Vector3d(1, 0, 0), 0.0, TraceConfig{});
  CHECK(cv.closed);
  CHECK(cv.length() == doctest::Approx(2 * M_PI).epsilon(1e-3 / (2 * M_PI)));
  CHECK((cv.points.front() - cv.points.back()).norm() < 2 * TraceConfig{}.max_step);
}

TEST_CASE("a line leaves the box") {
  const LocusSystem sys(v(0), v(1));
  TraceConfig cfg;
  const auto seeds = find_seeds(sys, 0.3, cfg);
  REQUIRE_FALSE(seeds.empty());
  for (const auto& s : seeds) {
    CHECK(std::abs(s[0]) < 1e-9);
    CHECK(std::abs(s[1]) < 1e-9);
  }
  const SliceCurve cv = trace_curve(sys, seeds.front(), 0.3, cfg);
  CHECK_FALSE(cv.closed);
  CHECK(cv.start.reason == Termination::BoxExit);
  CHECK(cv.end.reason == Termination::BoxExit);
  CHECK(cv.length() == doctest::Approx(4.4).epsilon(1e-6));
  CHECK(slice(sys, 0.3, cfg).size() == 1);  // one line, deduplicated
}

TEST_CASE("flagship seeds") {
  const auto& sys = flagship_system();
  TraceConfig cfg;
  const auto s0 = find_seeds(sys, 0.0, cfg);
  const bool near_pinch =
      std::any_of(s0.begin(), s0.end(), [](const Vector3d& p) { return (p - Vector3d(-1, 0, 0)).norm() < 0.1; });
  CHECK(near_pinch);
  CHECK(find_seeds(sys, 10.0, cfg).empty());
}

TEST_CASE("flagship slice satisfies the tracer contract") {
  const auto& sys = flagship_system();
  TraceConfig cfg;
  const double t = 0.05;
  const auto curves = slice(sys, t, cfg);
  REQUIRE_FALSE(curves.empty());
  double worst = 0;
  for (const auto& cv : curves) {
    for (std::size_t i = 0; i < cv.points.size(); ++i) {
      worst = std::max(worst, residual(sys, cv.points[i], t));
      if (i) CHECK((cv.points[i] - cv.points[i - 1]).norm() < 2 * cfg.max_step);
    }
    // closure fires when a step passes the seed, so the closing chord is one step
    if (cv.closed) CHECK((cv.points.front() - cv.points.back()).norm() < 2 * cfg.max_step);
  }
  CHECK(worst < 2 * cfg.corrector_tolerance);
  CHECK(worst < 1e-9);
}

TEST_CASE("slice curves are distinct") {
  const auto& sys = flagship_system();
  TraceConfig cfg;
  const auto curves = slice(sys, 0.05, cfg);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = 0; j < curves.size(); ++j) {
      if (i == j) continue;
      // not every point of i is on j
      CHECK(directed_distance_to_polylines(curves[i].points, {curves[j].points}) > cfg.closure_distance);
    }
  }
}

TEST_CASE("tracing is deterministic") {
  const auto& sys = flagship_system();
  TraceConfig cfg;
  const auto a = slice(sys, 0.03, cfg);
  const auto b = slice(sys, 0.03, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].points.size() == b[i].points.size());
    for (std::size_t k = 0; k < a[i].points.size(); ++k) CHECK((a[i].points[k].array() == b[i].points[k].array()).all());
  }
}

TEST_CASE("symmetry contract at traced points") {
  const auto& sys = flagship_system();
  TraceConfig cfg;
  const double t = 0.04;
  const double tol = 10 * cfg.corrector_tolerance;
  for (const auto& p : all_points(slice(sys, t, cfg))) {
    const S4Pointd x(p[0], p[1], p[2], t);
    CHECK(residual(sys, Chart::Standard, apply_generator(Generator::Theta, x).coords()) < tol);
    CHECK(residual(sys, Chart::Standard, apply_generator(Generator::Sigma, x).coords()) < tol);
    CHECK(residual(sys, Chart::Inverted, invert_point(apply_generator(Generator::Iota, x).coords())) < tol);
  }
}

TEST_CASE("inverted chart agrees with the standard chart") {
  const auto& sys = flagship_system();
  const double t = 0.05;
  TraceConfig std_cfg;
  TraceConfig inv_cfg;
  inv_cfg.chart = Chart::Inverted;
  const auto standard = slice(sys, t, std_cfg);
  const auto inverted = slice(sys, t, inv_cfg);
  REQUIRE_FALSE(inverted.empty());
  const SliceEquations eq(sys, Chart::Standard, t);
  std::vector<Vector3d> overlap;
  for (const auto& p : all_points(inverted)) {
    const double r = p.norm();
    if (r > 0.2 && r < 2.0) overlap.push_back(p);
  }
  REQUIRE(overlap.size() > 10);
  double worst_zero = 0;
  for (const auto& p : overlap) {
    const Vector4d x(p[0], p[1], p[2], t);
    const auto y = correct_onto_slice(eq, x, std_cfg.corrector_tolerance, 30, 1e-3);
    REQUIRE(y);
    worst_zero = std::max(worst_zero, (*y - x).norm());
  }
  // On the zero set of the standard chart, and covered by its traced curves
  // up to chord error (small loops near the pinches bend within one step).
  CHECK(worst_zero < 1e-6);
  CHECK(directed_distance_to_polylines(overlap, polylines(standard)) < std_cfg.max_step);
}

TEST_CASE("slices far out in time are empty in the standard chart") {
  CHECK(slice(flagship_system(), 5.0, TraceConfig{}).empty());
}
