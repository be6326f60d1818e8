#pragma once

// Topology of the discriminant locus from a slice sweep.
//
// The cellulation: vertices and edges are the graph G0 traced on the base
// slice x4 = t_b (pinch points, saddle crossings, and one artificial vertex
// per vertex-free loop); faces are the components of the slices just above
// and just below t_b, each followed outward in time and required to sweep an
// open disk (no merge, split or birth, ending in a death or in the point at
// infinity). Face boundaries are read off by projecting each near-base curve
// onto G0.

#include "twistor/tracer.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace twistor {

using Vec5 = Eigen::Matrix<double, 5, 1>;
/// Point of S^4 in x-space; nullopt is infinity.
using SpherePoint = std::optional<Eigen::Vector4d>;

/// One connected curve of a slice, assembled from pieces traced in the two
/// charts and glued where they cross the chart boundary.
struct Component {
  bool closed = false;
  std::vector<SpherePoint> points;
  /// Free ends (meaningful when !closed).
  std::array<CurveEnd, 2> ends;
  std::vector<std::size_t> pieces;

  bool through_infinity() const;
  std::vector<Vec5> embedded() const;
  Eigen::Vector4d centroid() const;  // finite points only
  double chordal_diameter() const;
};

struct Frame {
  double t = 0;
  /// One of the evenly spaced frames of [t_min, t_max] (or the base slice).
  bool uniform = false;
  std::vector<SliceCurve> pieces;
  std::vector<Component> components;
  std::vector<std::string> problems;
};

struct SweepConfig {
  double t_min = -0.15;
  double t_max = 0.15;
  int frames = 61;
  /// The slice that carries G0. Must lie strictly inside (t_min, t_max).
  double base_time = 0.0;
  /// Offset of the slices whose components become faces.
  double face_offset = 1e-3;
  double event_tolerance = 1e-5;
  /// Beyond the sweep range, geometric frames up to |t| = tail_end.
  double tail_end = 20.0;
  double tail_ratio = 1.5;
  /// The standard chart covers |x| <= chart_radius, the inverted chart the rest.
  double chart_radius = 2.0;
  /// Beyond this |t| the curves near infinity shrink like 1/|t| in the
  /// inverted chart, and its step sizes and radii are scaled to match.
  double inverted_scale_time = 0.1;
  TraceConfig trace;
  /// Known singular points of the locus (certified twistor-fibre images).
  std::vector<S4PointQ> singular_points;

  void validate() const;
  std::vector<double> frame_times() const;
};

/// Trace configuration for one chart at time t (box, radius, stop points,
/// and step sizes scaled to the slice size far out in time).
TraceConfig chart_config(const SweepConfig& cfg, Chart chart, double t);

/// Traces both charts at time t and glues the pieces into components.
/// `seeds` are extra x-space seed points (continuation from a previous frame).
Frame trace_frame(const LocusSystem& sys, double t, const SweepConfig& cfg, const std::vector<Eigen::Vector4d>& seeds = {});

enum class EventKind { Birth, Death, Merge, Split, Pinch, Saddle };
std::string event_kind_name(EventKind k);

struct Event {
  double t_lo = 0;
  double t_hi = 0;
  EventKind kind = EventKind::Death;
  std::vector<int> tracks;
  SpherePoint location;
};

/// A face candidate followed outward from the base slice.
struct Track {
  int side = 1;  // +1 above the base slice, -1 below
  /// Component index in each frame of its side, -1 once gone.
  std::vector<int> components;
  bool through_infinity = false;
  /// Index into SweepResult::events of the death (outward disappearance).
  int end_event = -1;
  /// Alive at the end of the tail; then it must shrink into infinity.
  bool reaches_tail_end = false;
  /// (t, chordal diameter) wherever the curve was seen.
  std::vector<std::pair<double, double>> size_history;
};

struct SweepSide {
  int side = 1;
  std::vector<Frame> frames;  // frames[0] is the face slice
  std::vector<Track> tracks;
};

struct SweepResult {
  Frame base;
  std::array<SweepSide, 2> sides;  // [0] above, [1] below
  std::vector<Event> events;
  std::vector<std::string> problems;

  /// Uniform frames of both sides in increasing time (base included).
  std::vector<const Frame*> uniform_frames() const;
};

/// Sweeps both sides of the base slice, tracks components, and localizes
/// every disappearance by bisection. Finite singular points inside the range
/// are reported as pinch events at their exact times.
SweepResult sweep(const LocusSystem& sys, const SweepConfig& cfg);

// ---- Cell complex ---------------------------------------------------------

enum class VertexKind { Pinch, Saddle, Artificial };

struct CellComplex {
  struct Vertex {
    SpherePoint point;
    VertexKind kind = VertexKind::Saddle;
    /// Index into SweepConfig::singular_points for marked vertices, else -1.
    int singular_index = -1;
  };
  struct Edge {
    int v0 = 0;
    int v1 = 0;
    std::vector<SpherePoint> arc;
  };
  /// Oriented edge use in a face boundary.
  struct EdgeUse {
    int edge = 0;
    bool forward = true;
  };
  struct Face {
    int side = 1;
    int track = -1;
    std::vector<EdgeUse> boundary;
  };

  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  std::vector<int> pinch_vertices;
  std::vector<std::string> problems;

  bool valid() const { return problems.empty(); }
};

CellComplex build_complex(const SweepResult& sweep, const SweepConfig& cfg);

long euler_characteristic(const CellComplex& c);
long euler_characteristic(long v, long e, long f);

struct SurfaceComponent {
  long chi = 0;
  int boundaries = 0;
  int genus = 0;
  bool orientable = true;
};

struct PinchReport {
  bool connected = false;
  /// Vertices whose link has more than one component.
  std::vector<int> pinch_vertices;
  std::vector<int> sheets_per_pinch;
  std::vector<SurfaceComponent> components;
  std::vector<std::string> problems;
};

/// Splits every vertex into one copy per link component, then removes the
/// copies of pinch vertices: each leaves one boundary circle.
PinchReport pinch_analysis(const CellComplex& c);

}  // namespace twistor
