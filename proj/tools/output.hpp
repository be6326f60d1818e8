#pragma once

// File formats written by the command-line tool: polyline JSON / CSV, the
// topology report, and SVG figures.

#include "twistor/io.hpp"
#include "twistor/topology.hpp"
#include "twistor/twistor_lines.hpp"

#include <string>
#include <vector>

namespace twistor::cli {

/// One drawable curve in x-space; breaks at infinity split it into runs.
struct Polyline {
  double t = 0;
  std::string chart = "standard";
  bool closed = false;
  std::vector<Eigen::Vector3d> points;
};

std::vector<Polyline> polylines(const std::vector<SliceCurve>& curves);
/// Finite runs of each component (an arc through infinity gives two runs).
std::vector<Polyline> polylines(const Frame& frame);

/// [{"t", "chart", "closed", "points": [[x1, x2, x3], ...]}, ...]
Json polylines_to_json(const std::vector<Polyline>& lines);
std::vector<Polyline> polylines_from_json(const Json& j);
/// Rows "t,curve_id,x1,x2,x3" after a header line.
std::string polylines_to_csv(const std::vector<Polyline>& lines);

Json fibers_to_json(const TwistorFiberSet& set, bool coplanar);

/// {"chi", "vertices", "edges", "faces", "pinch_points",
///  "components_after_pinch_removal": [{"chi", "boundaries", "genus"}]}
Json topology_report(const CellComplex& c, const PinchReport& p);
std::string topology_summary(const SweepResult& sw, const CellComplex& c, const PinchReport& p);

enum class Projection { Above, Side };  // (x1, x2) and (x2, x3)

/// Fixed viewport [-half_width, half_width]^2, numbers with 9 significant digits.
std::string render_svg(const std::vector<Polyline>& lines, Projection proj, const std::string& title,
                       double half_width = 2.2);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace twistor::cli
