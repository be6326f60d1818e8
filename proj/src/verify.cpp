#include "twistor/verify.hpp"

#include "twistor/io.hpp"
#include "twistor/twistor_lines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

namespace twistor {

namespace {

using Clock = std::chrono::steady_clock;
using Vec4 = Eigen::Vector4d;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::vector<S4PointQ> flagship_fiber_points() {
  std::vector<S4PointQ> out;
  for (const auto& f : find_twistor_fibers(transformed_fermat_cubic()).fibers) {
    if (f.certified && f.exact) out.push_back(*f.exact);
  }
  return out;
}

TraceConfig scaled_trace(double tol_scale) {
  TraceConfig cfg;
  cfg.corrector_tolerance *= tol_scale;
  return cfg;
}

double residual(const Eigen::Vector2d& pq) { return std::abs(pq[0]) + std::abs(pq[1]); }

// Evenly spread subsample of every traced vertex.
std::vector<Vec4> sample_slice(const std::vector<SliceCurve>& curves, double t, std::size_t n) {
  std::vector<Vec4> all;
  for (const auto& c : curves) {
    for (const auto& p : c.points) all.emplace_back(p[0], p[1], p[2], t);
  }
  if (all.size() <= n) return all;
  std::vector<Vec4> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(all[k * all.size() / n]);
  return out;
}

bool same_poly(const IntPoly& a, const IntPoly& b) { return a.vars() == b.vars() && (a - b).is_zero(); }

CheckResult guarded(int id, const std::string& name, const std::function<CheckResult()>& body) {
  try {
    CheckResult r = body();
    r.id = id;
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return {id, name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

// ---- 1 ----------------------------------------------------------------------

CheckResult check_discriminant(double) {
  CheckResult r;
  const auto t0 = Clock::now();
  const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  const double secs = seconds_since(t0);

  const int dp = lp.P.total_degree();
  const int dq = lp.Q.total_degree();
  const std::vector<Integer> e1{1, 0, 0, 0}, zero{0, 0, 0, 0};
  const Integer p1 = lp.P.evaluate(e1), q1 = lp.Q.evaluate(e1);
  const Integer p0 = lp.P.evaluate(zero), q0 = lp.Q.evaluate(zero);

  const bool degree_ok = dp == 12 && dq == 12;
  const bool time_ok = secs < 10.0;
  const bool values_ok = p1 == 16 && q1 == 0 && p0 == 0 && q0 == 0;
  r.pass = degree_ok && time_ok && values_ok;
  r.detail = "deg P = " + std::to_string(dp) + ", deg Q = " + std::to_string(dq) + " (expected 12); " + fmt(secs) +
             " s; (P,Q)(1,0,0,0) = (" + to_string(p1) + "," + to_string(q1) + "), (P,Q)(0) = (" + to_string(p0) + "," +
             to_string(q0) + ")";
  return r;
}

// ---- 2 ----------------------------------------------------------------------

CheckResult check_twistor_fibers(double tol_scale) {
  CheckResult r;
  const QSqrt3 half(Rational(1, 2));
  const QSqrt3 h3(Rational(0), Rational(1, 2));
  const std::vector<S4PointQ> expected{S4PointQ::infinity(), S4PointQ(0, 0, 0, 0), S4PointQ(-1, 0, 0, 0),
                                       S4PointQ(half, h3, 0, 0), S4PointQ(half, -h3, 0, 0)};

  const TwistorFiberSet flag = find_twistor_fibers(transformed_fermat_cubic());
  std::vector<S4PointQ> found;
  double worst_snap = 0;
  for (const auto& f : flag.fibers) {
    if (!f.certified || !f.exact) continue;
    found.push_back(*f.exact);
    worst_snap = std::max(worst_snap, f.snap_error);
  }
  bool set_ok = found.size() == expected.size();
  for (const auto& e : expected) set_ok = set_ok && std::count(found.begin(), found.end(), e) == 1;
  const bool snap_ok = worst_snap < 1e-9 * tol_scale;

  const std::size_t fermat = find_twistor_fibers(fermat_cubic()).certified_count();
  const bool coplanar = fiber_images_coplanar_or_cospherical(flag.certified_points());

  r.pass = set_ok && snap_ok && fermat == 3 && coplanar;
  std::string pts;
  for (const auto& p : found) pts += (pts.empty() ? "" : " ") + to_string(p);
  r.detail = std::to_string(found.size()) + " certified fibres {" + pts + "}" + (set_ok ? "" : " != expected set") +
             ", max snap error " + fmt(worst_snap) + "; Fermat cubic: " + std::to_string(fermat) +
             "; coplanar/cospherical: " + (coplanar ? "yes" : "no");
  return r;
}

// ---- 3 ----------------------------------------------------------------------

CheckResult check_fermat_equivalence() {
  CheckResult r;
  const ExactMatrix4 m = corrected_fermat_matrix();
  const QiSqrt3 det = determinant(m);
  const EquivalenceVerdict v = verify_fermat_equivalence(m);
  const EquivalenceVerdict printed = verify_fermat_equivalence(printed_fermat_matrix());

  // Same shape as printed: only the duplicated last row differs.
  const ExactMatrix4 p = printed_fermat_matrix();
  bool shape_ok = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) shape_ok = shape_ok && (m(i, j) - p(i, j)).is_zero();

  r.pass = !det.is_zero() && v.equivalent && v.scale && !v.scale->is_zero() && shape_ok;
  std::ostringstream os;
  os << "repaired row z4' = c x1 - b x4: det = " << det << ", " << (v.equivalent ? "equivalent" : "not equivalent");
  if (v.scale) os << ", F(Mx) = " << *v.scale << " E(x)";
  os << "; printed matrix: " << (printed.singular ? "singular" : printed.reason);
  r.detail = os.str();
  return r;
}

// ---- 4 ----------------------------------------------------------------------

CheckResult check_symmetry(double tol_scale) {
  CheckResult r;
  const std::size_t order = enumerate_group().size();

  const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  const LocusSystem sys(lp.P, lp.Q, flagship_fiber_points());
  const double t = 0.02;
  TraceConfig cfg = scaled_trace(tol_scale);
  const auto pts = sample_slice(slice(sys, t, cfg), t, 200);

  const double tol = 1e-8 * tol_scale;
  double worst[3] = {0, 0, 0};
  for (const Vec4& x : pts) {
    const S4Pointd p(x);
    const Vec4 th = apply_generator(Generator::Theta, p).coords();
    const Vec4 si = apply_generator(Generator::Sigma, p).coords();
    const Vec4 io = apply_generator(Generator::Iota, p).coords();
    worst[0] = std::max(worst[0], residual(sys.values(Chart::Standard, th)));
    worst[1] = std::max(worst[1], residual(sys.values(Chart::Standard, si)));
    // The inverted chart has coordinates v = iota(y) for the point y.
    worst[2] = std::max(worst[2], residual(sys.values(Chart::Inverted, invert_point(io))));
  }
  r.pass = order == 12 && pts.size() == 200 && worst[0] < tol && worst[1] < tol && worst[2] < tol;
  r.detail = "group order " + std::to_string(order) + "; " + std::to_string(pts.size()) +
             " points at t=0.02, max image residual theta " + fmt(worst[0]) + ", sigma " + fmt(worst[1]) + ", iota " +
             fmt(worst[2]) + " (tol " + fmt(tol) + ")";
  return r;
}

// ---- 5 ----------------------------------------------------------------------

CheckResult check_cubic_oracle(std::uint64_t seed, double tol_scale) {
  using C = std::complex<double>;
  CheckResult r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto draw = [&] { return C(u(rng), u(rng)); };

  double worst = 0;
  int n = 0;
  while (n < 500) {
    C a = draw();
    const C r1 = draw(), r2 = draw(), r3 = draw();
    if (std::abs(a) < 0.1 || std::abs(r1 - r2) < 0.05 || std::abs(r1 - r3) < 0.05 || std::abs(r2 - r3) < 0.05) continue;
    const C b = -a * (r1 + r2 + r3);
    const C c = a * (r1 * r2 + r1 * r3 + r2 * r3);
    const C d = -a * r1 * r2 * r3;
    const C formula = cubic_discriminant(a, b, c, d);
    const C diff = (r1 - r2) * (r1 - r3) * (r2 - r3);
    const C oracle = a * a * a * a * diff * diff;
    worst = std::max(worst, std::abs(formula - oracle) / std::abs(oracle));
    ++n;
  }

  const std::vector<std::string> vars{"a", "b", "c", "d"};
  const IntPoly zero(vars);
  const IntPoly dd = cubic_discriminant(zero, zero, IntPoly::variable(vars, 2), IntPoly::variable(vars, 3));

  const double tol = 1e-8 * tol_scale;
  r.pass = worst < tol && dd.is_zero();
  r.detail = "500 random cubics, max relative error " + fmt(worst) + " (tol " + fmt(tol) + "); Delta(0,0,c,d) " +
             (dd.is_zero() ? "== 0 exactly" : "is NOT identically zero");
  return r;
}

// ---- 6 ----------------------------------------------------------------------

FlagshipTopology flagship_topology(int frames, double tolerance_scale) {
  FlagshipTopology out;
  const auto t0 = Clock::now();
  const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  out.cfg.frames = frames;
  out.cfg.singular_points = flagship_fiber_points();
  out.cfg.trace.corrector_tolerance *= tolerance_scale;
  const LocusSystem sys(lp.P, lp.Q, out.cfg.singular_points);
  out.sweep = sweep(sys, out.cfg);
  out.complex = build_complex(out.sweep, out.cfg);
  out.pinches = pinch_analysis(out.complex);
  out.seconds = seconds_since(t0);
  return out;
}

bool events_sigma_paired(const std::vector<Event>& events, double time_tol, double space_tol) {
  auto mirror_kind = [](EventKind k) {
    if (k == EventKind::Birth) return EventKind::Death;
    if (k == EventKind::Death) return EventKind::Birth;
    if (k == EventKind::Merge) return EventKind::Split;
    if (k == EventKind::Split) return EventKind::Merge;
    return k;
  };
  auto mirror_point = [](const SpherePoint& p) -> SpherePoint {
    if (!p) return p;
    return Vec4((*p)[0], (*p)[1], -(*p)[2], -(*p)[3]);
  };
  std::vector<bool> used(events.size(), false);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const double mid = 0.5 * (e.t_lo + e.t_hi);
    int best = -1;
    double best_d = space_tol;
    for (std::size_t j = 0; j < events.size(); ++j) {
      const Event& f = events[j];
      if (used[j] || f.kind != mirror_kind(e.kind)) continue;
      if (std::abs(0.5 * (f.t_lo + f.t_hi) + mid) > time_tol) continue;
      const double d = (sphere_embed(mirror_point(e.location)) - sphere_embed(f.location)).norm();
      if (d <= best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) return false;
    // Self-paired only when the event sits on t = 0.
    used[best] = true;
  }
  return true;
}

CheckResult check_topology(const FlagshipTopology& T) {
  CheckResult r;
  const SweepResult& sw = T.sweep;
  const CellComplex& cx = T.complex;
  const PinchReport& pr = T.pinches;

  int uniform = 0;
  for (const Frame* f : sw.uniform_frames()) uniform += f->t >= T.cfg.t_min && f->t <= T.cfg.t_max ? 1 : 0;
  double widest = 0;
  for (const auto& e : sw.events) widest = std::max(widest, e.t_hi - e.t_lo);

  // Detected pinch vertices against the certified fibre images.
  bool pinch_set = pr.pinch_vertices.size() == T.cfg.singular_points.size();
  std::vector<bool> hit(T.cfg.singular_points.size(), false);
  for (int v : pr.pinch_vertices) {
    const SpherePoint& p = cx.vertices[v].point;
    bool matched = false;
    for (std::size_t k = 0; k < hit.size(); ++k) {
      const S4Pointd q = to_double(T.cfg.singular_points[k]);
      const SpherePoint qs = q.is_infinity() ? SpherePoint{} : SpherePoint{q.coords()};
      if (!hit[k] && (sphere_embed(p) - sphere_embed(qs)).norm() < 1e-6) {
        hit[k] = matched = true;
        break;
      }
    }
    pinch_set = pinch_set && matched;
  }
  const bool two_sheets =
      std::all_of(pr.sheets_per_pinch.begin(), pr.sheets_per_pinch.end(), [](int s) { return s == 2; });
  const bool tori = pr.components.size() == 2 && std::all_of(pr.components.begin(), pr.components.end(), [](const auto& c) {
                      return c.chi == -5 && c.boundaries == 5 && c.genus == 1;
                    });
  const long chi = euler_characteristic(cx);
  const bool paired = events_sigma_paired(sw.events, 4 * T.cfg.event_tolerance, 1e-2);

  r.pass = sw.problems.empty() && cx.valid() && pr.problems.empty() && uniform >= 60 &&
           widest < T.cfg.event_tolerance && pr.connected && chi == -5 && pr.pinch_vertices.size() == 5 && pinch_set &&
           two_sheets && tori && paired;
  std::ostringstream os;
  os << uniform << " uniform frames, " << sw.events.size() << " events (widest " << fmt(widest) << ", "
     << (paired ? "sigma-paired" : "NOT sigma-paired") << "); V=" << cx.vertices.size() << " E=" << cx.edges.size()
     << " F=" << cx.faces.size() << " chi=" << chi << ", " << (pr.connected ? "connected" : "disconnected") << ", "
     << pr.pinch_vertices.size() << " pinch vertices" << (pinch_set ? " at the fibre images" : " NOT at the fibre images")
     << (two_sheets ? " (2 sheets each)" : " (sheet count != 2)") << "; after removal:";
  for (const auto& c : pr.components) os << " [chi " << c.chi << ", b " << c.boundaries << ", g " << c.genus << "]";
  const std::size_t issues = sw.problems.size() + cx.problems.size() + pr.problems.size();
  if (issues) {
    os << "; " << issues << " problem(s), first: "
       << (!sw.problems.empty() ? sw.problems.front() : !cx.problems.empty() ? cx.problems.front() : pr.problems.front());
  }
  os << "; " << fmt(T.seconds) << " s";
  r.detail = os.str();
  return r;
}

// ---- 7 ----------------------------------------------------------------------

double time_reversal_distance(const LocusSystem& sys, const TraceConfig& cfg, double t, double tol,
                              std::array<std::size_t, 2>* curve_counts) {
  double worst = 0;
  for (int k = 0; k < 2; ++k) {
    const double s = k == 0 ? t : -t;
    const SliceEquations target(sys, Chart::Standard, -s);
    const auto curves = slice(sys, s, cfg);
    if (curve_counts) (*curve_counts)[k] = curves.size();
    for (const Vec4& x : sample_slice(curves, s, 400)) {
      const Vec4 mirrored(x[0], x[1], -x[2], -x[3]);
      const auto y = correct_onto_slice(target, mirrored, tol, 30, 1e-3);
      worst = std::max(worst, y ? (*y - mirrored).norm() : std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

CheckResult check_time_reversal(double tol_scale) {
  CheckResult r;
  const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  const LocusSystem sys(lp.P, lp.Q, flagship_fiber_points());
  const TraceConfig cfg = scaled_trace(tol_scale);
  double worst = 0;
  std::string mismatch;
  for (int k = 1; k <= 10; ++k) {
    std::array<std::size_t, 2> n{};
    worst = std::max(worst, time_reversal_distance(sys, cfg, 0.01 * k, cfg.corrector_tolerance, &n));
    if (n[0] != n[1]) mismatch += " t=" + fmt(0.01 * k) + ":" + std::to_string(n[0]) + "/" + std::to_string(n[1]);
  }
  const double tol = 1e-6 * tol_scale;
  r.pass = worst < tol && mismatch.empty();
  r.detail = "t = 0.01..0.1: max distance from sigma(slice(t)) to slice(-t) and back " + fmt(worst) + " (tol " +
             fmt(tol) + "); curve counts " + (mismatch.empty() ? "agree" : "differ:" + mismatch);
  return r;
}

// ---- 8 ----------------------------------------------------------------------

CheckResult check_loops_vanish(const FlagshipTopology& T) {
  CheckResult r;
  const SweepResult& sw = T.sweep;
  // Loops can only appear at births, splits and pinch slices (where the
  // curves are pinned at singular points and the count is undefined); the
  // window opens after the last of these in [0, 0.1].
  double start = 0.0;
  bool opened_by_event = false;
  for (const auto& e : sw.events) {
    const bool raises = e.kind == EventKind::Birth || e.kind == EventKind::Split || e.kind == EventKind::Pinch;
    if (raises && e.t_lo >= 0 && e.t_hi <= 0.1 && e.t_hi >= start) {
      start = e.t_hi;
      opened_by_event = true;
    }
  }
  std::vector<std::pair<double, int>> counts;
  for (const Frame* f : sw.uniform_frames()) {
    if (f->t < start || (opened_by_event && f->t <= start) || f->t > 0.1 + 1e-12) continue;
    int loops = 0;
    for (const auto& p : f->pieces) loops += p.chart == Chart::Standard && p.closed ? 1 : 0;
    counts.emplace_back(f->t, loops);
  }
  bool monotone = counts.size() >= 2;
  for (std::size_t i = 1; i < counts.size(); ++i) monotone = monotone && counts[i].second <= counts[i - 1].second;
  const bool drops = counts.size() >= 2 && counts.back().second < counts.front().second;

  // Every death inside the range is preceded by shrinking.
  int deaths = 0;
  bool shrinking = true;
  for (const auto& side : sw.sides) {
    for (const auto& tr : side.tracks) {
      if (tr.end_event < 0) continue;
      const Event& e = sw.events[tr.end_event];
      if (e.kind != EventKind::Death || e.t_hi > 0.1 || e.t_lo < 0) continue;
      ++deaths;
      const auto& h = tr.size_history;
      if (h.size() < 3) continue;
      for (std::size_t k = h.size() - 2; k < h.size(); ++k) shrinking = shrinking && h[k].second < h[k - 1].second;
    }
  }

  r.pass = monotone && drops && deaths > 0 && shrinking;
  std::ostringstream os;
  os << "standard-chart loops on " << (opened_by_event ? "(" : "[") << fmt(start) << ", 0.1]:";
  for (std::size_t i = 0; i < counts.size(); i += std::max<std::size_t>(1, counts.size() / 6)) os << " " << counts[i].second;
  if (!counts.empty()) os << " ... " << counts.back().second;
  os << (monotone ? " (non-increasing)" : " (NOT monotone)") << "; " << deaths << " deaths in [0, 0.1]"
     << (shrinking ? ", each after shrinking" : ", some without shrinking");
  r.detail = os.str();
  return r;
}

// ---- serialization ---------------------------------------------------------

CheckResult check_serialization(const std::optional<std::string>& p_path, const std::optional<std::string>& q_path) {
  CheckResult r;
  const LocusPolys lp = discriminant_locus_polys(transformed_fermat_cubic());
  if (!p_path && !q_path) {
    const IntPoly p = poly_from_json<Integer>(Json::parse(poly_to_json(lp.P).dump()));
    const IntPoly q = poly_from_json<Integer>(Json::parse(poly_to_json(lp.Q).dump()));
    r.pass = same_poly(p, lp.P) && same_poly(q, lp.Q);
    r.detail = std::string("in-memory JSON round trip ") + (r.pass ? "exact" : "differs");
    return r;
  }
  r.pass = true;
  for (const auto& [path, ref, label] : {std::tuple{p_path, &lp.P, "P"}, std::tuple{q_path, &lp.Q, "Q"}}) {
    if (!path) continue;
    std::string what;
    try {
      what = same_poly(poly_from_json<Integer>(read_json_file(*path)), *ref) ? "matches" : "differs from recomputation";
    } catch (const std::exception& e) {
      what = std::string("unreadable (") + e.what() + ")";
    }
    r.pass = r.pass && what == "matches";
    r.detail += (r.detail.empty() ? "" : "; ") + std::string(label) + " " + *path + ": " + what;
  }
  if (!r.pass) r.detail = "serialization integrity error: " + r.detail;
  return r;
}

// ---- driver -----------------------------------------------------------------

std::vector<CheckResult> run_acceptance(const VerifyOptions& opt,
                                        const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> out;
  auto emit = [&](CheckResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  const double s = opt.tolerance_scale;
  emit(guarded(1, "discriminant degree and point values", [&] { return check_discriminant(s); }));
  emit(guarded(2, "twistor fibres", [&] { return check_twistor_fibers(s); }));
  emit(guarded(3, "Fermat equivalence", [] { return check_fermat_equivalence(); }));
  emit(guarded(4, "symmetry group and zero-set invariance", [&] { return check_symmetry(s); }));
  emit(guarded(5, "cubic discriminant oracle", [&] { return check_cubic_oracle(opt.seed, s); }));

  std::optional<FlagshipTopology> topo;
  std::string topo_error = "sweep skipped";
  if (!opt.skip_sweep) {
    try {
      topo = flagship_topology(opt.frames, s);
    } catch (const std::exception& e) {
      topo_error = std::string("exception: ") + e.what();
    }
  }
  auto with_topo = [&](int id, const std::string& name, CheckResult (*fn)(const FlagshipTopology&)) {
    if (!topo) return CheckResult{id, name, false, topo_error};
    return guarded(id, name, [&] { return fn(*topo); });
  };
  emit(with_topo(6, "topology of the locus", check_topology));
  emit(guarded(7, "sigma time reversal", [&] { return check_time_reversal(s); }));
  emit(with_topo(8, "loops shrink and vanish", check_loops_vanish));
  emit(guarded(9, "serialization integrity", [&] { return check_serialization(opt.p_path, opt.q_path); }));
  return out;
}

}  // namespace twistor
