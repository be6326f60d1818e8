// twistor: command-line front end for the discriminant-locus pipeline.

#include "output.hpp"

#include "twistor/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace twistor;
using namespace twistor::cli;

namespace {

struct Common {
  std::string surface = "preset:transformed-fermat";
  std::string p_path, q_path;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_pq) {
  sub->add_option("--surface", c.surface, "preset:fermat, preset:transformed-fermat, a polynomial JSON file, or an expression in z1..z4")
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "seed for randomized sampling")->capture_default_str();
  if (with_pq) {
    sub->add_option("--p", c.p_path, "load P from this JSON file instead of recomputing");
    sub->add_option("--q", c.q_path, "load Q from this JSON file instead of recomputing");
  }
}

std::vector<S4PointQ> certified_points(const Surface& f, std::uint64_t seed) {
  FiberSearchConfig cfg;
  cfg.seed = seed;
  std::vector<S4PointQ> out;
  try {
    for (const auto& fb : find_twistor_fibers(f, cfg).fibers) {
      if (fb.certified && fb.exact) out.push_back(*fb.exact);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "note: no fibre search (" << e.what() << ")\n";
  }
  return out;
}

struct Locus {
  LocusPolys polys;
  std::vector<S4PointQ> singular;
};

Locus load_locus(const Common& c) {
  const Surface f = load_surface(c.surface);
  Locus L;
  if (c.p_path.empty() != c.q_path.empty()) throw std::invalid_argument("--p and --q go together");
  if (!c.p_path.empty()) {
    L.polys = {poly_from_json<Integer>(read_json_file(c.p_path)), poly_from_json<Integer>(read_json_file(c.q_path))};
  } else {
    L.polys = discriminant_locus_polys(f);
  }
  L.singular = certified_points(f, c.seed);
  return L;
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::string frame_name(std::size_t i, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "frame_%03zu%s", i, suffix);
  return buf;
}

std::string time_label(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "t = %.9g", t);
  return buf;
}

// A manifest {"command", "surface", "out", "seed", "config": {...}} becomes
// the equivalent argument list; config keys map to --key (underscores to
// dashes), true booleans to bare flags.
std::vector<std::string> manifest_args(const std::string& path) {
  const Json m = read_json_file(path);
  std::vector<std::string> args{m.at("command").get<std::string>()};
  auto push = [&](const std::string& key, const Json& v) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
      return;
    }
    args.push_back(flag);
    args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  };
  for (const char* key : {"surface", "out", "seed"}) {
    if (m.contains(key)) push(key, m[key]);
  }
  if (m.contains("config")) {
    for (const auto& [k, v] : m["config"].items()) push(k, v);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  // --manifest must come alone; it is expanded before parsing.
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() == 2 && args[0] == "--manifest") {
    try {
      args = manifest_args(args[1]);
    } catch (const std::exception& e) {
      std::cerr << "error: manifest: " << e.what() << "\n";
      return 1;
    }
  }
  std::reverse(args.begin(), args.end());  // CLI11 takes a reversed vector

  CLI::App app{"Discriminant locus of a cubic surface under the twistor projection"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::string manifest_unused;
  app.add_option("--manifest", manifest_unused, "JSON run manifest (use on its own)");

  Common common;
  std::string out = ".";
  int status = 0;

  // discriminant
  auto* disc = app.add_subcommand("discriminant", "compute P and Q, write P.json and Q.json");
  add_common(disc, common, false);
  disc->add_option("--out", out, "output directory")->capture_default_str();
  disc->callback([&] {
    const LocusPolys lp = discriminant_locus_polys(load_surface(common.surface));
    const fs::path dir = ensure_dir(out);
    write_json_file((dir / "P.json").string(), poly_to_json(lp.P));
    write_json_file((dir / "Q.json").string(), poly_to_json(lp.Q));
    std::cout << "P: degree " << lp.P.total_degree() << ", " << lp.P.num_terms() << " terms\n";
    std::cout << "Q: degree " << lp.Q.total_degree() << ", " << lp.Q.num_terms() << " terms\n";
  });

  // fibers
  auto* fib = app.add_subcommand("fibers", "find and certify the twistor fibres in the surface");
  add_common(fib, common, false);
  fib->callback([&] {
    FiberSearchConfig cfg;
    cfg.seed = common.seed;
    const TwistorFiberSet set = find_twistor_fibers(load_surface(common.surface), cfg);
    const bool coplanar = fiber_images_coplanar_or_cospherical(set.certified_points());
    std::cout << fibers_to_json(set, coplanar).dump(2) << "\n";
  });

  // slice
  double t = 0;
  std::string chart = "standard";
  int grid = 61;
  auto* sl = app.add_subcommand("slice", "trace the slice x4 = t; write slice.json and slice.csv");
  add_common(sl, common, true);
  sl->add_option("--t", t, "slice time")->required();
  sl->add_option("--chart", chart, "standard or inverted")->check(CLI::IsMember({"standard", "inverted"}))->capture_default_str();
  sl->add_option("--grid", grid, "seed grid points per axis")->capture_default_str();
  sl->add_option("--out", out, "output directory")->capture_default_str();
  sl->callback([&] {
    const Locus L = load_locus(common);
    const LocusSystem sys(L.polys.P, L.polys.Q, L.singular);
    TraceConfig cfg;
    cfg.grid_resolution = grid;
    cfg.chart = chart == "standard" ? Chart::Standard : Chart::Inverted;
    for (const auto& s : L.singular) {
      if (s.is_infinity()) {
        cfg.stop_at_infinity = true;
      } else {
        cfg.stop_points.push_back(to_double(s).coords());
      }
    }
    const auto lines = polylines(slice(sys, t, cfg));
    const fs::path dir = ensure_dir(out);
    write_json_file((dir / "slice.json").string(), polylines_to_json(lines));
    write_text_file((dir / "slice.csv").string(), polylines_to_csv(lines));
    std::cout << lines.size() << " curves at t = " << t << "\n";
  });

  // sweep
  double t_min = 0, t_max = 0.1;
  int frames = 8;
  auto* sw = app.add_subcommand("sweep", "trace frames in both charts; write SVG views from above and from the side");
  add_common(sw, common, true);
  sw->add_option("--t-min", t_min)->capture_default_str();
  sw->add_option("--t-max", t_max)->capture_default_str();
  sw->add_option("--frames", frames)->check(CLI::PositiveNumber)->capture_default_str();
  sw->add_option("--out", out, "output directory")->capture_default_str();
  sw->callback([&] {
    const Locus L = load_locus(common);
    const LocusSystem sys(L.polys.P, L.polys.Q, L.singular);
    SweepConfig cfg;
    cfg.singular_points = L.singular;
    const fs::path dir = ensure_dir(out);
    for (int i = 0; i < frames; ++i) {
      const double ti = frames == 1 ? t_min : t_min + (t_max - t_min) * i / (frames - 1);
      const Frame f = trace_frame(sys, ti, cfg);
      const auto lines = polylines(f);
      write_json_file((dir / frame_name(i, ".json")).string(), polylines_to_json(lines));
      write_text_file((dir / frame_name(i, "_above.svg")).string(), render_svg(lines, Projection::Above, time_label(ti)));
      write_text_file((dir / frame_name(i, "_side.svg")).string(), render_svg(lines, Projection::Side, time_label(ti)));
      int loops = 0;
      for (const auto& c : f.components) loops += c.closed && !c.through_infinity() ? 1 : 0;
      std::cout << time_label(ti) << ": " << f.components.size() << " components, " << loops << " finite loops\n";
    }
  });

  // topology
  double tmin_topo = -0.15, tmax_topo = 0.15;
  int frames_topo = 61;
  auto* topo = app.add_subcommand("topology", "sweep, build the cell complex, write topology.json");
  add_common(topo, common, true);
  topo->add_option("--t-min", tmin_topo)->capture_default_str();
  topo->add_option("--t-max", tmax_topo)->capture_default_str();
  topo->add_option("--frames", frames_topo)->check(CLI::Range(2, 100000))->capture_default_str();
  topo->add_option("--out", out, "output directory")->capture_default_str();
  topo->callback([&] {
    const Locus L = load_locus(common);
    const LocusSystem sys(L.polys.P, L.polys.Q, L.singular);
    SweepConfig cfg;
    cfg.t_min = tmin_topo;
    cfg.t_max = tmax_topo;
    cfg.frames = frames_topo;
    cfg.singular_points = L.singular;
    const SweepResult result = sweep(sys, cfg);
    const CellComplex cx = build_complex(result, cfg);
    const PinchReport pr = pinch_analysis(cx);
    write_json_file((ensure_dir(out) / "topology.json").string(), topology_report(cx, pr));
    std::cout << topology_summary(result, cx, pr);
    if (!result.problems.empty() || !cx.valid() || !pr.problems.empty()) status = 2;
  });

  // verify
  VerifyOptions vopt;
  std::string verify_out;
  std::string vp, vq;
  auto* ver = app.add_subcommand("verify", "run the acceptance checks; JSON verdict, nonzero exit on any failure");
  ver->add_option("--tolerance-scale", vopt.tolerance_scale, "multiply every numeric tolerance")->capture_default_str();
  ver->add_option("--frames", vopt.frames, "sweep frames")->capture_default_str();
  ver->add_option("--seed", vopt.seed, "seed for the random cubics")->capture_default_str();
  ver->add_option("--p", vp, "serialized P to check against a recomputation");
  ver->add_option("--q", vq, "serialized Q to check against a recomputation");
  ver->add_flag("--skip-sweep", vopt.skip_sweep, "skip the flagship sweep (its checks then fail)");
  ver->add_option("--out", verify_out, "also write the JSON here");
  ver->callback([&] {
    if (!vp.empty()) vopt.p_path = vp;
    if (!vq.empty()) vopt.q_path = vq;
    Json checks = Json::array();
    bool all = true;
    for (const auto& r : run_acceptance(vopt, [](const CheckResult& r) {
           std::cerr << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << "\n";
         })) {
      all = all && r.pass;
      checks.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    const Json verdict{{"pass", all}, {"checks", checks}};
    std::cout << verdict.dump(2) << "\n";
    if (!verify_out.empty()) write_json_file(verify_out, verdict);
    if (!all) status = 1;
  });

  // render
  std::string in_path, svg_path, projection = "above";
  auto* ren = app.add_subcommand("render", "draw a polyline JSON file as SVG");
  ren->add_option("--in", in_path, "polyline JSON (from slice or sweep)")->required()->check(CLI::ExistingFile);
  ren->add_option("--out", svg_path, "SVG file")->required();
  ren->add_option("--projection", projection, "above (x1,x2) or side (x2,x3)")
      ->check(CLI::IsMember({"above", "side"}))
      ->capture_default_str();
  ren->callback([&] {
    const auto lines = polylines_from_json(read_json_file(in_path));
    const std::string title = lines.empty() ? std::string("empty") : time_label(lines.front().t);
    write_text_file(svg_path, render_svg(lines, projection == "above" ? Projection::Above : Projection::Side, title));
  });

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}
