#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twistor::cli {

namespace {

std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Json point_json(const S4Pointd& p) {
  if (p.is_infinity()) return "inf";
  return Json::array({p[0], p[1], p[2], p[3]});
}

const char* palette(std::size_t i) {
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
  return colours[i % 8];
}

}  // namespace

std::vector<Polyline> polylines(const std::vector<SliceCurve>& curves) {
  std::vector<Polyline> out;
  for (const auto& c : curves) out.push_back({c.t, chart_name(c.chart), c.closed, c.points});
  return out;
}

std::vector<Polyline> polylines(const Frame& frame) {
  std::vector<Polyline> out;
  for (const auto& comp : frame.components) {
    const std::string chart = comp.through_infinity() ? "both" : "standard";
    Polyline run{frame.t, chart, false, {}};
    auto flush = [&] {
      if (run.points.size() >= 2) out.push_back(run);
      run.points.clear();
    };
    for (const auto& p : comp.points) {
      if (!p) {
        flush();
        continue;
      }
      run.points.emplace_back((*p)[0], (*p)[1], (*p)[2]);
    }
    if (comp.closed && !comp.through_infinity() && !run.points.empty()) {
      run.closed = true;
      out.push_back(run);
    } else {
      flush();
    }
  }
  return out;
}

Json polylines_to_json(const std::vector<Polyline>& lines) {
  Json arr = Json::array();
  for (const auto& l : lines) {
    Json pts = Json::array();
    for (const auto& p : l.points) pts.push_back({p[0], p[1], p[2]});
    arr.push_back(Json{{"t", l.t}, {"chart", l.chart}, {"closed", l.closed}, {"points", std::move(pts)}});
  }
  return arr;
}

std::vector<Polyline> polylines_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("polyline file must hold a JSON array");
  std::vector<Polyline> out;
  for (const auto& e : j) {
    Polyline l;
    l.t = e.at("t").get<double>();
    l.chart = e.at("chart").get<std::string>();
    l.closed = e.at("closed").get<bool>();
    for (const auto& p : e.at("points")) l.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
    out.push_back(std::move(l));
  }
  return out;
}

std::string polylines_to_csv(const std::vector<Polyline>& lines) {
  std::ostringstream os;
  os << "t,curve_id,x1,x2,x3\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const auto& p : lines[i].points) {
      os << g9(lines[i].t) << ',' << i << ',' << g9(p[0]) << ',' << g9(p[1]) << ',' << g9(p[2]) << '\n';
    }
  }
  return os.str();
}

Json fibers_to_json(const TwistorFiberSet& set, bool coplanar) {
  Json fibers = Json::array();
  for (const auto& f : set.fibers) {
    Json e{{"point", point_json(f.point)}, {"certified", f.certified}, {"residual", f.residual}};
    if (f.exact) {
      e["exact"] = to_string(*f.exact);
      e["snap_error"] = f.snap_error;
    }
    fibers.push_back(std::move(e));
  }
  return Json{{"certified_count", set.certified_count()}, {"coplanar_or_cospherical", coplanar}, {"fibers", fibers}};
}

Json topology_report(const CellComplex& c, const PinchReport& p) {
  Json pinches = Json::array();
  for (int v : p.pinch_vertices) {
    const auto& pt = c.vertices[v].point;
    pinches.push_back(pt ? Json::array({(*pt)[0], (*pt)[1], (*pt)[2], (*pt)[3]}) : Json("inf"));
  }
  Json comps = Json::array();
  for (const auto& s : p.components) comps.push_back(Json{{"chi", s.chi}, {"boundaries", s.boundaries}, {"genus", s.genus}});
  return Json{{"chi", euler_characteristic(c)},
              {"vertices", c.vertices.size()},
              {"edges", c.edges.size()},
              {"faces", c.faces.size()},
              {"pinch_points", pinches},
              {"components_after_pinch_removal", comps}};
}

std::string topology_summary(const SweepResult& sw, const CellComplex& c, const PinchReport& p) {
  std::ostringstream os;
  std::size_t frames = sw.sides[0].frames.size() + sw.sides[1].frames.size() + 1;
  os << "frames: " << frames << ", events: " << sw.events.size() << "\n";
  for (const auto& e : sw.events) {
    os << "  " << event_kind_name(e.kind) << " in [" << g9(e.t_lo) << ", " << g9(e.t_hi) << "]\n";
  }
  os << "cells: V=" << c.vertices.size() << " E=" << c.edges.size() << " F=" << c.faces.size()
     << "  chi=" << euler_characteristic(c) << "\n";
  os << (p.connected ? "connected" : "not connected") << ", " << p.pinch_vertices.size() << " pinch points\n";
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& s = p.components[i];
    os << "  component " << i << ": chi=" << s.chi << " boundaries=" << s.boundaries << " genus=" << s.genus
       << (s.orientable ? " orientable" : " non-orientable") << "\n";
  }
  for (const auto* list : {&sw.problems, &c.problems, &p.problems}) {
    for (const auto& m : *list) os << "problem: " << m << "\n";
  }
  return os.str();
}

std::string render_svg(const std::vector<Polyline>& lines, Projection proj, const std::string& title, double half_width) {
  const double size = 800;
  const double scale = size / (2 * half_width);
  const int a = proj == Projection::Above ? 0 : 1;
  const int b = proj == Projection::Above ? 1 : 2;
  auto X = [&](double v) { return g9((v + half_width) * scale); };
  auto Y = [&](double v) { return g9((half_width - v) * scale); };  // y up

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  os << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  os << "<line x1=\"0\" y1=\"" << Y(0) << "\" x2=\"800\" y2=\"" << Y(0) << "\" stroke=\"#ccc\"/>\n";
  os << "<line x1=\"" << X(0) << "\" y1=\"0\" x2=\"" << X(0) << "\" y2=\"800\" stroke=\"#ccc\"/>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    os << '<' << (l.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << palette(i)
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < l.points.size(); ++k) {
      os << (k ? " " : "") << X(l.points[k][a]) << ',' << Y(l.points[k][b]);
    }
    os << "\"/>\n";
  }
  const char* axes = proj == Projection::Above ? "x1, x2" : "x2, x3";
  os << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title << " (" << axes << ")</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace twistor::cli
