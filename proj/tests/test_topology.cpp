#include "twistor/topology.hpp"
#include "twistor/twistor_lines.hpp"
#include "twistor/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace twistor;

namespace {

const auto X = default_vars(4, "x");

IntPoly v(int k) { return IntPoly::variable(X, k); }
IntPoly c(int n) { return IntPoly::constant(X, Integer(n)); }

using EU = CellComplex::EdgeUse;

// Boundary of a tetrahedron on vertices a..d, consistently oriented.
void add_tetrahedron(CellComplex& cx, std::array<int, 4> w) {
  const int e = static_cast<int>(cx.edges.size());
  const std::array<std::pair<int, int>, 6> ed{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  for (auto [a, b] : ed) cx.edges.push_back({w[a], w[b], {}});
  auto face = [&](std::initializer_list<EU> b) { cx.faces.push_back({1, -1, std::vector<EU>(b)}); };
  face({{e + 0, true}, {e + 3, true}, {e + 1, false}});
  face({{e + 2, true}, {e + 4, false}, {e + 0, false}});
  face({{e + 1, true}, {e + 5, true}, {e + 2, false}});
  face({{e + 4, true}, {e + 5, false}, {e + 3, false}});
}

CellComplex with_vertices(int n) {
  CellComplex cx;
  cx.vertices.resize(n);
  return cx;
}

// Sphere x1^2 + x2^2 + x4 = 1/10 in x3 = 0: one loop that dies at t = 1/10
// and grows into infinity as t decreases.
LocusSystem paraboloid() {
  return LocusSystem(c(10) * v(0) * v(0) + c(10) * v(1) * v(1) + c(10) * v(3) - c(1), v(2));
}

}  // namespace

TEST_CASE("Euler characteristic") {
  CHECK(euler_characteristic(1, 2, 1) == 0);
  CHECK(euler_characteristic(2, 2, 2) == 2);
}

TEST_CASE("pinch analysis on hand-built complexes") {
  SUBCASE("sphere") {
    CellComplex cx = with_vertices(4);
    add_tetrahedron(cx, {0, 1, 2, 3});
    CHECK(euler_characteristic(cx) == 2);
    const auto r = pinch_analysis(cx);
    CHECK(r.problems.empty());
    CHECK(r.connected);
    CHECK(r.pinch_vertices.empty());
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0].chi == 2);
    CHECK(r.components[0].genus == 0);
    CHECK(r.components[0].orientable);
  }
  SUBCASE("torus from one square") {
    CellComplex cx = with_vertices(1);
    cx.edges = {{0, 0, {}}, {0, 0, {}}};
    cx.faces.push_back({1, -1, {{0, true}, {1, true}, {0, false}, {1, false}}});
    const auto r = pinch_analysis(cx);
    CHECK(r.problems.empty());
    CHECK(r.pinch_vertices.empty());
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0].chi == 0);
    CHECK(r.components[0].genus == 1);
  }
  SUBCASE("two spheres glued at a point") {
    CellComplex cx = with_vertices(7);
    add_tetrahedron(cx, {0, 1, 2, 3});
    add_tetrahedron(cx, {0, 4, 5, 6});
    CHECK(euler_characteristic(cx) == 3);
    const auto r = pinch_analysis(cx);
    CHECK(r.problems.empty());
    CHECK(r.connected);
    REQUIRE(r.pinch_vertices.size() == 1);
    CHECK(r.pinch_vertices[0] == 0);
    CHECK(r.sheets_per_pinch[0] == 2);
    REQUIRE(r.components.size() == 2);
    for (const auto& s : r.components) {
      CHECK(s.chi == 1);  // a disk
      CHECK(s.boundaries == 1);
      CHECK(s.genus == 0);
    }
  }
  SUBCASE("an unmatched edge is reported") {
    CellComplex cx = with_vertices(4);
    add_tetrahedron(cx, {0, 1, 2, 3});
    cx.faces.pop_back();
    CHECK_FALSE(pinch_analysis(cx).problems.empty());
  }
}

TEST_CASE("sweep configuration validation") {
  SweepConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.base_time = cfg.t_max;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SweepConfig{};
  cfg.frames = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("a paraboloid sweeps out a sphere") {
  const LocusSystem sys = paraboloid();
  for (int frames : {31, 61}) {
    CAPTURE(frames);
    SweepConfig cfg;
    cfg.frames = frames;
    const SweepResult s = sweep(sys, cfg);
    CHECK(s.problems.empty());

    int deaths = 0;
    for (const auto& e : s.events) {
      if (e.kind != EventKind::Death) continue;
      ++deaths;
      if (e.t_lo > 0) {
        CHECK(std::abs(0.5 * (e.t_lo + e.t_hi) - 0.1) < 1e-5);
        CHECK(e.t_hi - e.t_lo < cfg.event_tolerance);
      }
    }
    CHECK(deaths >= 1);

    // radius sqrt(1/10 - t) in the plane x3 = 0
    for (const Frame* f : s.uniform_frames()) {
      if (f->t > 0.09 || f->t < -0.1) continue;
      REQUIRE(f->components.size() == 1);
      CHECK(f->components[0].closed);
      for (const auto& p : f->components[0].points) {
        REQUIRE(p);
        CHECK(std::hypot((*p)[0], (*p)[1]) == doctest::Approx(std::sqrt(0.1 - f->t)).epsilon(1e-6));
        CHECK(std::abs((*p)[2]) < 1e-9);
      }
    }

    const CellComplex cx = build_complex(s, cfg);
    CHECK(cx.problems.empty());
    CHECK(euler_characteristic(cx) == 2);
    const auto r = pinch_analysis(cx);
    CHECK(r.problems.empty());
    CHECK(r.connected);
    CHECK(r.pinch_vertices.empty());
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0].genus == 0);
  }
}

TEST_CASE("flagship frame components close up on the sphere") {
  const auto E = transformed_fermat_cubic();
  const auto lp = discriminant_locus_polys(E);
  SweepConfig cfg;
  for (const auto& f : find_twistor_fibers(E).fibers) cfg.singular_points.push_back(*f.exact);
  const LocusSystem sys(lp.P, lp.Q, cfg.singular_points);
  const Frame f = trace_frame(sys, 0.05, cfg);
  CHECK(f.problems.empty());
  REQUIRE_FALSE(f.components.empty());
  // Every slice meets the pinch at infinity; loops through it end there twice.
  for (const auto& comp : f.components) {
    if (comp.closed) continue;
    CHECK(comp.through_infinity());
    CHECK_FALSE(comp.points.front());
    CHECK_FALSE(comp.points.back());
    CHECK(comp.ends[0].reason == Termination::StopPoint);
    CHECK(comp.ends[1].reason == Termination::StopPoint);
  }
  // open standard-chart pieces are all glued into something
  std::vector<int> used(f.pieces.size(), 0);
  for (const auto& comp : f.components) {
    for (std::size_t k : comp.pieces) ++used[k];
  }
  for (std::size_t k = 0; k < f.pieces.size(); ++k) CHECK(used[k] == 1);
}

TEST_CASE("sigma pairing of events") {
  Event birth{-0.05, -0.05 + 1e-6, EventKind::Birth, {}, Eigen::Vector4d(1, 2, 3, -0.05)};
  Event death{0.05 - 1e-6, 0.05, EventKind::Death, {}, Eigen::Vector4d(1, 2, -3, 0.05)};
  Event pinch{0, 0, EventKind::Pinch, {}, Eigen::Vector4d(-1, 0, 0, 0)};
  CHECK(events_sigma_paired({birth, death, pinch}, 1e-5, 1e-2));
  CHECK_FALSE(events_sigma_paired({birth, pinch}, 1e-5, 1e-2));
  Event wrong = death;
  wrong.location = Eigen::Vector4d(1, 2, 3, 0.05);  // not reflected in x3
  CHECK_FALSE(events_sigma_paired({birth, wrong}, 1e-5, 1e-2));
  Event late = death;
  late.t_lo += 1e-3;
  late.t_hi += 1e-3;
  CHECK_FALSE(events_sigma_paired({birth, late}, 1e-5, 1e-2));
}
