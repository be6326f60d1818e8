#pragma once

// Slice-curve extraction for the discriminant locus.
//
// At time t the slice is { x in R^3 : P(x, t) = Q(x, t) = 0 }. Every slice is
// traced in R^4 chart coordinates v as the zero set of three equations
//
//   standard chart:  P(v) = 0, Q(v) = 0, v4 - t = 0
//   inverted chart:  P~(v) = 0, Q~(v) = 0, t |v|^2 + v4 = 0
//
// where P~ = invert_chart(P). The second form is the image of the hyperplane
// x4 = t under the inversion, so both charts see the same slice and points
// are reported back in x-space.

#include "twistor/core.hpp"
#include "twistor/discriminant.hpp"
#include "twistor/numeric_poly.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace twistor {

/// Compiled locus polynomials for both charts.
///
/// P and Q vanish to high order at the pinch points, and plain evaluation
/// there is lost in cancellation. Each `centre` (an exact finite point or
/// infinity) gets an exact Taylor re-expansion P(c + y), used within
/// `local_radius` of c in the chart where c is finite.
class LocusSystem {
 public:
  LocusSystem(IntPoly P, IntPoly Q, const std::vector<S4PointQ>& centres = {}, double local_radius = 0.25);

  const IntPoly& P() const { return P_; }
  const IntPoly& Q() const { return Q_; }
  const IntPoly& P(Chart c) const { return c == Chart::Standard ? P_ : P_inv_; }
  const IntPoly& Q(Chart c) const { return c == Chart::Standard ? Q_ : Q_inv_; }

  /// (P, Q) at chart coordinates v, with the 2x4 Jacobian when requested.
  Eigen::Vector2d values(Chart c, const Eigen::Vector4d& v, Eigen::Matrix<double, 2, 4>* jac = nullptr) const;

 private:
  struct Expansion {
    Eigen::Vector4d centre;
    RealNumericPoly P, Q;
  };
  const std::vector<Expansion>& expansions(Chart c) const { return c == Chart::Standard ? local_ : local_inv_; }

  IntPoly P_, Q_, P_inv_, Q_inv_;
  RealNumericPoly nP_, nQ_, nP_inv_, nQ_inv_;
  std::vector<Expansion> local_, local_inv_;
  double local_radius_;
};

/// iota(x) = (x1, -x2, -x3, -x4) / |x|^2 (quaternion inverse).
Eigen::Vector4d invert_point(const Eigen::Vector4d& x);

/// Chordal embedding of R^4 u {inf} into the unit sphere of R^5; `nullopt`
/// stands for infinity. Distances here are chart independent.
Eigen::Matrix<double, 5, 1> sphere_embed(const std::optional<Eigen::Vector4d>& x);

/// The three slice equations in one chart at a fixed time.
class SliceEquations {
 public:
  using Jacobian = Eigen::Matrix<double, 3, 4>;

  SliceEquations(const LocusSystem& sys, Chart chart, double t);

  Chart chart() const { return chart_; }
  double time() const { return t_; }

  Eigen::Vector3d operator()(const Eigen::Vector4d& v, Jacobian* jac = nullptr) const;
  /// |P| + |Q| at v (the time equation is satisfied by construction).
  double residual(const Eigen::Vector4d& v) const;

  Eigen::Vector4d to_x(const Eigen::Vector4d& v) const;
  Eigen::Vector4d from_x(const Eigen::Vector4d& x) const;
  /// Lift of a spatial grid point onto the time constraint, if it exists.
  std::optional<Eigen::Vector4d> lift(const Eigen::Vector3d& spatial) const;

 private:
  const LocusSystem* sys_;
  Chart chart_;
  double t_;
};

/// Row-normalized Jacobian, its smallest singular value, and the
/// cofactor kernel vector (zero exactly when the rank drops).
struct JacobianInfo {
  Eigen::Vector3d residual;
  SliceEquations::Jacobian normalized;
  double sigma_min = 0;
  Eigen::Vector4d kernel;
};

JacobianInfo analyze_jacobian(const SliceEquations& eq, const Eigen::Vector4d& v);

struct TraceConfig {
  int grid_resolution = 61;
  /// Box on the first three chart coordinates.
  Eigen::Vector3d box_min{-2.2, -2.2, -2.2};
  Eigen::Vector3d box_max{2.2, 2.2, 2.2};
  /// Optional bound on the R^4 norm of chart coordinates (0 = off).
  double radius_limit = 0.0;
  double corrector_tolerance = 1e-10;
  double predictor_step = 0.01;
  double min_step = 1e-7;
  double max_step = 0.05;
  double closure_distance = 0.02;
  double singularity_threshold = 1e-5;
  Chart chart = Chart::Standard;
  /// Known singular points in x-space where traces stop.
  std::vector<Eigen::Vector4d> stop_points;
  /// Whether infinity is a stop point (meaningful in the inverted chart).
  bool stop_at_infinity = false;
  double stop_radius = 0.01;
  std::size_t max_points = 200000;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

enum class Termination { Closed, BoxExit, RadiusExit, StopPoint, Bifurcation, StepUnderflow, PointLimit };

std::string termination_name(Termination t);

struct CurveEnd {
  Termination reason = Termination::Closed;
  /// Index into TraceConfig::stop_points, or -2 for infinity, when reason == StopPoint.
  int stop_index = -1;
  /// Refined singular point in chart coordinates, when reason == Bifurcation.
  std::optional<Eigen::Vector4d> singular_point;
};

struct SliceCurve {
  double t = 0;
  Chart chart = Chart::Standard;
  bool closed = false;
  /// Chart coordinates of each vertex of the polyline.
  std::vector<Eigen::Vector4d> chart_points;
  /// x-space (x1, x2, x3); x4 = t.
  std::vector<Eigen::Vector3d> points;
  double max_residual = 0;
  std::vector<std::size_t> singular_indices;
  CurveEnd start;
  CurveEnd end;
  std::string diagnostic;

  std::size_t size() const { return points.size(); }
  double length() const;
};

/// Gauss-Newton projection onto the slice (minimum-norm steps). Returns the
/// converged point or nullopt.
std::optional<Eigen::Vector4d> correct_onto_slice(const SliceEquations& eq, Eigen::Vector4d v, double tol,
                                                  int max_iter = 30, double max_move = 0.0);

/// Gauss-Newton on { slice equations, kernel(J) = 0 } from v0.
std::optional<Eigen::Vector4d> refine_singular_point(const SliceEquations& eq, const Eigen::Vector4d& v0);

/// Grid seeds on the slice, returned in chart coordinates sorted
/// lexicographically.
std::vector<Eigen::Vector4d> find_seeds_chart(const LocusSystem& sys, double t, const TraceConfig& cfg);
/// Same seeds mapped to x-space (x1, x2, x3).
std::vector<Eigen::Vector3d> find_seeds(const LocusSystem& sys, double t, const TraceConfig& cfg);

/// Traces the curve through a chart-coordinate seed in both directions.
SliceCurve trace_curve_chart(const LocusSystem& sys, const Eigen::Vector4d& seed, double t, const TraceConfig& cfg);
/// Seed given in x-space.
SliceCurve trace_curve(const LocusSystem& sys, const Eigen::Vector3d& seed, double t, const TraceConfig& cfg);

/// Seeds, traces and de-duplicates all curves of the slice in cfg.chart.
/// `extra_seeds` (chart coordinates) are traced before grid seeds.
std::vector<SliceCurve> slice(const LocusSystem& sys, double t, const TraceConfig& cfg,
                              const std::vector<Eigen::Vector4d>& extra_seeds = {});

/// Convenience overloads from the exact polynomials.
std::vector<SliceCurve> slice(const IntPoly& P, const IntPoly& Q, double t, const TraceConfig& cfg);

/// Symmetric Hausdorff distance between point sets (brute force on samples).
double hausdorff_distance(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b);
/// One-sided: max over a of distance to the polyline set b.
double directed_distance_to_polylines(const std::vector<Eigen::Vector3d>& a,
                                      const std::vector<std::vector<Eigen::Vector3d>>& b);

}  // namespace twistor
