#include "output.hpp"

#include <doctest.h>

#include <regex>
#include <sstream>

using namespace twistor;
using namespace twistor::cli;

namespace {

std::vector<Polyline> sample() {
  Polyline a;
  a.t = 0.05;
  a.closed = true;
  a.points = {{1.0 / 3, 0, 0}, {0, 2.0 / 3, -1e-7}, {-1.23456789012, 0, 0.5}};
  Polyline b;
  b.t = 0.05;
  b.chart = "both";
  b.points = {{3, 1, 4}, {1, 5, 9}};
  return {a, b};
}

}  // namespace

TEST_CASE("polyline JSON round trip is exact") {
  const auto lines = sample();
  const auto back = polylines_from_json(Json::parse(polylines_to_json(lines).dump()));
  REQUIRE(back.size() == lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CHECK(back[i].t == lines[i].t);
    CHECK(back[i].chart == lines[i].chart);
    CHECK(back[i].closed == lines[i].closed);
    REQUIRE(back[i].points.size() == lines[i].points.size());
    for (std::size_t k = 0; k < lines[i].points.size(); ++k) CHECK(back[i].points[k] == lines[i].points[k]);
  }
  CHECK_THROWS(polylines_from_json(Json::parse(R"([{"t": 0}])")));
}

TEST_CASE("polyline CSV") {
  const std::string csv = polylines_to_csv(sample());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,curve_id,x1,x2,x3");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
  CHECK(csv.find("0.05,0,0.333333333,0,0\n") != std::string::npos);
  CHECK(csv.find("-1.23456789,") != std::string::npos);
  CHECK(csv.find("0.05,1,3,1,4\n") != std::string::npos);
}

TEST_CASE("SVG uses a fixed viewport and 9 significant digits") {
  const std::string above = render_svg(sample(), Projection::Above, "t = 0.05");
  const std::string side = render_svg(sample(), Projection::Side, "t = 0.05");
  CHECK(above.rfind("<svg", 0) == 0);
  CHECK(above.find("width=\"800\"") != std::string::npos);
  CHECK(above.find("<polygon") != std::string::npos);   // closed curve
  CHECK(above.find("<polyline") != std::string::npos);  // open curve
  CHECK(above.find("t = 0.05") != std::string::npos);
  CHECK(above != side);
  // no number carries more than 9 significant digits
  const std::regex long_number("[0-9]\\.?[0-9]{10,}");
  CHECK_FALSE(std::regex_search(above, long_number));
  // rendering is a pure function of its input
  CHECK(above == render_svg(sample(), Projection::Above, "t = 0.05"));
}

TEST_CASE("topology report keys") {
  CellComplex cx;
  cx.vertices.resize(1);
  cx.edges = {{0, 0, {}}, {0, 0, {}}};
  cx.faces.push_back({1, -1, {{0, true}, {1, true}, {0, false}, {1, false}}});
  const Json j = topology_report(cx, pinch_analysis(cx));
  CHECK(j.at("chi") == 0);
  CHECK(j.at("vertices") == 1);
  CHECK(j.at("edges") == 2);
  CHECK(j.at("faces") == 1);
  CHECK(j.at("pinch_points").is_array());
  CHECK(j.at("pinch_points").empty());
  REQUIRE(j.at("components_after_pinch_removal").size() == 1);
  const Json& comp = j.at("components_after_pinch_removal")[0];
  CHECK(comp.at("chi") == 0);
  CHECK(comp.at("boundaries") == 0);
  CHECK(comp.at("genus") == 1);
}

TEST_CASE("fibre JSON") {
  const auto set = find_twistor_fibers(fermat_cubic());
  const Json j = fibers_to_json(set, false);
  CHECK(j.at("certified_count") == 3);
  CHECK(j.at("coplanar_or_cospherical") == false);
  CHECK(j.at("fibers").size() == set.fibers.size());
}
