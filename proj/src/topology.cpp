#include "twistor/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace twistor {

namespace {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double segment_distance5(const Vec5& p, const Vec5& a, const Vec5& b) {
  const Vec5 d = b - a;
  const double l2 = d.squaredNorm();
  const double u = l2 > 0 ? std::clamp((p - a).dot(d) / l2, 0.0, 1.0) : 0.0;
  return (p - a - u * d).norm();
}

double polyline_distance5(const Vec5& p, const std::vector<Vec5>& line, bool closed) {
  if (line.empty()) return kInf;
  double best = (p - line[0]).norm();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) best = std::min(best, segment_distance5(p, line[i], line[i + 1]));
  if (closed && line.size() > 2) best = std::min(best, segment_distance5(p, line.back(), line.front()));
  return best;
}

// Nearest and second-nearest component of a frame.
struct Nearest {
  int index = -1;
  double d1 = kInf;
  double d2 = kInf;
};

Nearest nearest_component(const Vec5& p, const std::vector<std::vector<Vec5>>& lines, const Frame& f) {
  Nearest n;
  for (std::size_t c = 0; c < lines.size(); ++c) {
    const double d = polyline_distance5(p, lines[c], f.components[c].closed);
    if (d < n.d1) {
      n.d2 = n.d1;
      n.d1 = d;
      n.index = static_cast<int>(c);
    } else if (d < n.d2) {
      n.d2 = d;
    }
  }
  return n;
}

bool is_infinity_end(const CurveEnd& e) { return e.reason == Termination::StopPoint && e.stop_index == -2; }

// ---- Gluing pieces across the chart boundary ------------------------------

std::vector<SpherePoint> piece_points(const SliceCurve& c) {
  std::vector<SpherePoint> out;
  if (!c.closed && is_infinity_end(c.start)) out.emplace_back(std::nullopt);
  for (const auto& p : c.points) out.emplace_back(Vec4(p[0], p[1], p[2], c.t));
  if (!c.closed && is_infinity_end(c.end)) out.emplace_back(std::nullopt);
  return out;
}

const CurveEnd& end_of(const SliceCurve& c, int e) { return e == 0 ? c.start : c.end; }

Vec4 end_point(const SliceCurve& c, int e) {
  const Vec3& p = e == 0 ? c.points.front() : c.points.back();
  return Vec4(p[0], p[1], p[2], c.t);
}

std::vector<Component> assemble(const std::vector<SliceCurve>& pieces, double radius, std::vector<std::string>& problems) {
  const std::size_t n = pieces.size();
  // partner[2 p + e] = 2 q + l for glued radius exits.
  std::vector<int> partner(2 * n, -1);
  std::vector<int> std_ends, inv_ends;
  for (std::size_t p = 0; p < n; ++p) {
    if (pieces[p].closed || pieces[p].points.empty()) continue;
    for (int e = 0; e < 2; ++e) {
      if (end_of(pieces[p], e).reason != Termination::RadiusExit) continue;
      (pieces[p].chart == Chart::Standard ? std_ends : inv_ends).push_back(static_cast<int>(2 * p + e));
    }
  }
  auto pos = [&](int id) { return end_point(pieces[id / 2], id % 2); };
  auto nearest_in = [&](int id, const std::vector<int>& pool) {
    int best = -1;
    double bd = kInf;
    for (int o : pool) {
      const double d = (pos(id) - pos(o)).norm();
      if (d < bd) {
        bd = d;
        best = o;
      }
    }
    return std::make_pair(best, bd);
  };
  const double glue_tol = 1e-6 * std::max(1.0, radius);
  for (int a : std_ends) {
    auto [b, d] = nearest_in(a, inv_ends);
    if (b < 0 || d > glue_tol || nearest_in(b, std_ends).first != a) continue;
    partner[a] = b;
    partner[b] = a;
  }
  for (int id : std_ends) {
    if (partner[id] < 0) problems.push_back("unglued chart-boundary crossing at t=" + fmt(pieces[id / 2].t));
  }
  for (int id : inv_ends) {
    if (partner[id] < 0) problems.push_back("unglued chart-boundary crossing at t=" + fmt(pieces[id / 2].t));
  }

  std::vector<Component> out;
  std::vector<bool> used(n, false);
  for (std::size_t p = 0; p < n; ++p) {
    if (used[p] || pieces[p].points.empty()) continue;
    if (pieces[p].closed) {
      used[p] = true;
      Component c;
      c.closed = true;
      c.points = piece_points(pieces[p]);
      c.pieces = {p};
      c.ends = {pieces[p].start, pieces[p].end};
      out.push_back(std::move(c));
      continue;
    }
    // Walk backwards to a free end, or detect a cycle.
    int cur = static_cast<int>(p), e = 0;
    bool cycle = false;
    while (partner[2 * cur + e] >= 0) {
      const int q = partner[2 * cur + e];
      if (q / 2 == static_cast<int>(p)) {
        cycle = true;
        break;
      }
      cur = q / 2;
      e = 1 - q % 2;
    }
    if (cycle) {
      cur = static_cast<int>(p);
      e = 0;
    }
    Component c;
    c.ends[0] = end_of(pieces[cur], e);
    const int first = cur;
    while (true) {
      used[cur] = true;
      c.pieces.push_back(cur);
      auto pts = piece_points(pieces[cur]);
      if (e == 1) std::reverse(pts.begin(), pts.end());
      const std::size_t skip = c.points.empty() ? 0 : 1;  // shared boundary point
      c.points.insert(c.points.end(), pts.begin() + static_cast<long>(std::min(skip, pts.size())), pts.end());
      const int out_end = 2 * cur + (1 - e);
      const int q = partner[out_end];
      if (q < 0) {
        c.ends[1] = end_of(pieces[cur], 1 - e);
        break;
      }
      if (q / 2 == first) {
        c.closed = true;
        if (!c.points.empty()) c.points.pop_back();
        break;
      }
      cur = q / 2;
      e = q % 2;
    }
    out.push_back(std::move(c));
  }
  return out;
}

Component component_from_piece(const SliceCurve& c) {
  std::vector<std::string> ignored;
  auto comps = assemble({c}, 1.0, ignored);
  return comps.empty() ? Component{} : comps.front();
}

std::vector<Vec4> finite_points(const Component& c) {
  std::vector<Vec4> out;
  for (const auto& p : c.points) {
    if (p) out.push_back(*p);
  }
  return out;
}

// Up to n evenly spaced finite points; arcs lose their outer tenth at each end.
std::vector<Vec4> sample_points(const Component& c, std::size_t n) {
  const auto pts = finite_points(c);
  if (pts.empty()) return {};
  std::size_t lo = 0, hi = pts.size();
  if (!c.closed && pts.size() > 10) {
    lo = pts.size() / 10;
    hi = pts.size() - lo;
  }
  const std::size_t m = hi - lo;
  std::vector<Vec4> out;
  const std::size_t k = std::min(n, m);
  for (std::size_t i = 0; i < k; ++i) out.push_back(pts[lo + (i * m) / k]);
  return out;
}

Chart chart_for(const Vec4& x, double radius) { return x.norm() <= radius ? Chart::Standard : Chart::Inverted; }

// Size of slice features in chart units (1 except far out in time, where
// the slice shrinks into infinity).
double chart_scale(const SweepConfig& cfg, Chart chart, double t) {
  if (chart == Chart::Standard || std::abs(t) <= cfg.inverted_scale_time) return 1.0;
  return cfg.inverted_scale_time / std::abs(t);
}

std::optional<Vec4> correct_x(const LocusSystem& sys, const SweepConfig& cfg, double t, const Vec4& guess,
                              double max_move) {
  const Chart ch = chart_for(guess, cfg.chart_radius);
  const SliceEquations eq(sys, ch, t);
  auto v = correct_onto_slice(eq, eq.from_x(guess), cfg.trace.corrector_tolerance, 30,
                              max_move * chart_scale(cfg, ch, t));
  if (!v) return std::nullopt;
  if (ch == Chart::Inverted && v->norm() < 1e-12) return std::nullopt;
  return eq.to_x(*v);
}

Vec4 predict(const Vec4& x, double t_old, double t_new, double radius, bool tail) {
  if (tail && x.norm() > radius && t_old != 0.0) return x * (t_new / t_old);
  return Vec4(x[0], x[1], x[2], t_new);
}

// Follows a closed loop seen at its own time to time t1. The result must be a
// closed loop near the old one.
std::optional<Component> pursue_loop(const LocusSystem& sys, const SweepConfig& cfg, const Component& loop, double t1) {
  const auto xs = finite_points(loop);
  if (xs.size() < 3) return std::nullopt;
  Vec4 cx = Vec4::Zero();
  for (const auto& x : xs) cx += x;
  cx /= static_cast<double>(xs.size());
  const Chart ch = chart_for(cx, cfg.chart_radius);
  const SliceEquations eq(sys, ch, t1);

  std::vector<Vec4> vs;
  for (const auto& x : xs) vs.push_back(eq.from_x(Vec4(x[0], x[1], x[2], t1)));
  Vec4 cv = Vec4::Zero();
  for (const auto& v : vs) cv += v;
  cv /= static_cast<double>(vs.size());
  double diam = 0;
  const std::size_t stride = std::max<std::size_t>(1, vs.size() / 200);
  for (std::size_t i = 0; i < vs.size(); i += stride) {
    for (std::size_t j = i + stride; j < vs.size(); j += stride) diam = std::max(diam, (vs[i] - vs[j]).norm());
  }
  if (!(diam > 0)) return std::nullopt;
  const double ball = 1.5 * diam + 1e-9;

  TraceConfig tc = chart_config(cfg, ch, t1);
  const double h = std::clamp(diam / 40, 1e-9, tc.predictor_step);
  tc.predictor_step = h;
  tc.max_step = std::min(tc.max_step, 4 * h);
  tc.min_step = h * 1e-4;
  tc.closure_distance = std::min(tc.closure_distance, diam / 8);
  tc.stop_radius = std::min(tc.stop_radius, diam / 4);
  tc.radius_limit = 0;
  tc.box_min = cv.head<3>() - Vec3::Constant(2 * ball);
  tc.box_max = cv.head<3>() + Vec3::Constant(2 * ball);
  tc.max_points = 50000;

  int attempts = 0;
  const std::size_t step = std::max<std::size_t>(1, vs.size() / 16);
  for (std::size_t i = 0; i < vs.size() && attempts < 4; i += step) {
    auto c = correct_onto_slice(eq, vs[i], tc.corrector_tolerance, 30, ball);
    if (!c || (*c - cv).norm() > ball) continue;
    ++attempts;
    SliceCurve sc = trace_curve_chart(sys, *c, t1, tc);
    if (!sc.closed || sc.chart_points.size() < 8) continue;
    bool inside = std::all_of(sc.chart_points.begin(), sc.chart_points.end(),
                              [&](const Vec4& p) { return (p - cv).norm() <= 2 * ball; });
    if (inside) return component_from_piece(sc);
  }
  return std::nullopt;
}

struct Bisection {
  double t_lo, t_hi;
  Component last;
};

// Shrinks [t_alive, t_gone] around the disappearance of `loop` (alive at t_alive).
Bisection bisect_disappearance(const LocusSystem& sys, const SweepConfig& cfg, Component loop, double t_alive,
                               double t_gone, Track& track) {
  while (std::abs(t_gone - t_alive) > cfg.event_tolerance) {
    const double mid = 0.5 * (t_alive + t_gone);
    if (auto next = pursue_loop(sys, cfg, loop, mid)) {
      loop = std::move(*next);
      t_alive = mid;
      track.size_history.emplace_back(mid, loop.chordal_diameter());
    } else {
      t_gone = mid;
    }
  }
  return {t_alive, t_gone, std::move(loop)};
}

EventKind outward_kind(EventKind k, int side) {
  if (side > 0) return k;
  switch (k) {
    case EventKind::Birth: return EventKind::Death;
    case EventKind::Death: return EventKind::Birth;
    case EventKind::Merge: return EventKind::Split;
    case EventKind::Split: return EventKind::Merge;
    default: return k;
  }
}

Event make_event(EventKind outward, int side, double ta, double tb, int track, SpherePoint where) {
  Event e;
  e.kind = outward_kind(outward, side);
  e.t_lo = std::min(ta, tb);
  e.t_hi = std::max(ta, tb);
  if (track >= 0) e.tracks.push_back(track);
  e.location = std::move(where);
  return e;
}

}  // namespace

// ---- Component --------------------------------------------------------------

bool Component::through_infinity() const { return !closed && is_infinity_end(ends[0]) && is_infinity_end(ends[1]); }

std::vector<Vec5> Component::embedded() const {
  std::vector<Vec5> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(sphere_embed(p));
  return out;
}

Eigen::Vector4d Component::centroid() const {
  Vec4 c = Vec4::Zero();
  int n = 0;
  for (const auto& p : points) {
    if (!p) continue;
    c += *p;
    ++n;
  }
  return n ? Vec4(c / n) : c;
}

double Component::chordal_diameter() const {
  const auto e = embedded();
  const std::size_t stride = std::max<std::size_t>(1, e.size() / 200);
  double d = 0;
  for (std::size_t i = 0; i < e.size(); i += stride) {
    for (std::size_t j = i + stride; j < e.size(); j += stride) d = std::max(d, (e[i] - e[j]).norm());
  }
  return d;
}

// ---- Configuration ----------------------------------------------------------

void SweepConfig::validate() const {
  trace.validate();
  if (frames < 3) throw std::invalid_argument("a sweep needs at least 3 frames");
  if (!(t_min < base_time && base_time < t_max)) throw std::invalid_argument("base time must lie inside (t_min, t_max)");
  const double spacing = (t_max - t_min) / (frames - 1);
  if (!(face_offset > 0 && face_offset < spacing)) throw std::invalid_argument("face offset must be in (0, frame spacing)");
  if (!(event_tolerance > 0)) throw std::invalid_argument("event tolerance must be positive");
  if (!(tail_ratio > 1)) throw std::invalid_argument("tail ratio must exceed 1");
  if (!(chart_radius > 0)) throw std::invalid_argument("chart radius must be positive");
  if (!(inverted_scale_time > 0)) throw std::invalid_argument("inverted scale time must be positive");
}

std::vector<double> SweepConfig::frame_times() const {
  std::vector<double> ts;
  for (int k = 0; k < frames; ++k) {
    double t = t_min + (t_max - t_min) * k / (frames - 1);
    if (std::abs(t - base_time) < 1e-12) t = base_time;
    ts.push_back(t);
  }
  return ts;
}

TraceConfig chart_config(const SweepConfig& cfg, Chart chart, double t) {
  TraceConfig c = cfg.trace;
  c.chart = chart;
  c.stop_points.clear();
  c.stop_at_infinity = false;
  for (const auto& p : cfg.singular_points) {
    if (p.is_infinity()) {
      c.stop_at_infinity = true;
    } else {
      c.stop_points.push_back(to_double(p).coords());
    }
  }
  const double R = cfg.chart_radius;
  if (chart == Chart::Standard) {
    c.radius_limit = R;
    c.box_min = Vec3::Constant(-1.1 * R);
    c.box_max = Vec3::Constant(1.1 * R);
    return c;
  }
  // The inverted image of x4 = t is a sphere through 0 of diameter 1/|t|.
  const double r = 1.0 / R;
  const double bound = std::abs(t) > 0 ? std::min(r, 1.0 / std::abs(t)) : r;
  const double s = chart_scale(cfg, chart, t);
  c.radius_limit = r;
  c.box_min = Vec3::Constant(-1.1 * bound);
  c.box_max = Vec3::Constant(1.1 * bound);
  c.predictor_step *= s;
  c.max_step *= s;
  c.min_step *= s;
  c.closure_distance *= s;
  c.stop_radius *= s;
  return c;
}

// ---- Frames -------------------------------------------------------------------

Frame trace_frame(const LocusSystem& sys, double t, const SweepConfig& cfg, const std::vector<Vec4>& seeds) {
  Frame f;
  f.t = t;
  const bool base = t == cfg.base_time;
  for (Chart ch : {Chart::Standard, Chart::Inverted}) {
    // x4 = t misses the ball |x| <= R entirely.
    if (ch == Chart::Standard && std::abs(t) >= cfg.chart_radius) continue;
    const TraceConfig tc = chart_config(cfg, ch, t);
    const SliceEquations eq(sys, ch, t);
    std::vector<Vec4> extra;
    for (const auto& x : seeds) {
      if (chart_for(x, cfg.chart_radius) == ch) extra.push_back(eq.from_x(x));
    }
    for (auto& c : slice(sys, t, tc, extra)) {
      for (const CurveEnd* e : {&c.start, &c.end}) {
        if (c.closed) break;
        const auto r = e->reason;
        const bool ok = r == Termination::RadiusExit || r == Termination::StopPoint ||
                        (base && r == Termination::Bifurcation);
        if (!ok) {
          f.problems.push_back("slice t=" + fmt(t) + " (" + chart_name(ch) + "): curve ends with " +
                               termination_name(r) + (c.diagnostic.empty() ? "" : " [" + c.diagnostic + "]"));
        }
      }
      f.pieces.push_back(std::move(c));
    }
  }
  f.components = assemble(f.pieces, cfg.chart_radius, f.problems);
  return f;
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Birth: return "birth";
    case EventKind::Death: return "death";
    case EventKind::Merge: return "merge";
    case EventKind::Split: return "split";
    case EventKind::Pinch: return "pinch";
    case EventKind::Saddle: return "saddle";
  }
  return "?";
}

std::vector<const Frame*> SweepResult::uniform_frames() const {
  std::vector<const Frame*> out;
  if (base.uniform) out.push_back(&base);
  for (const auto& s : sides) {
    for (const auto& f : s.frames) {
      if (f.uniform) out.push_back(&f);
    }
  }
  std::sort(out.begin(), out.end(), [](const Frame* a, const Frame* b) { return a->t < b->t; });
  return out;
}

// ---- Sweep --------------------------------------------------------------------

namespace {

struct Schedule {
  double t;
  bool uniform;
  bool tail;
};

std::vector<Schedule> side_schedule(const SweepConfig& cfg, int side) {
  std::vector<Schedule> out;
  out.push_back({cfg.base_time + side * cfg.face_offset, false, false});
  auto ts = cfg.frame_times();
  if (side < 0) std::reverse(ts.begin(), ts.end());
  for (double t : ts) {
    if (side * (t - cfg.base_time) > cfg.face_offset) out.push_back({t, true, false});
  }
  const double edge = side > 0 ? cfg.t_max : cfg.t_min;
  double d = std::abs(edge - cfg.base_time);
  while (true) {
    d *= cfg.tail_ratio;
    const double t = cfg.base_time + side * d;
    if (std::abs(t) >= cfg.tail_end) {
      out.push_back({side * cfg.tail_end, false, true});
      break;
    }
    out.push_back({t, false, true});
  }
  return out;
}

class SideSweeper {
 public:
  SideSweeper(const LocusSystem& sys, const SweepConfig& cfg, int side, int track_offset, SweepResult& result)
      : sys_(sys), cfg_(cfg), side_(side), offset_(track_offset), result_(result) {}

  SweepSide run() {
    SweepSide S;
    S.side = side_;
    const auto schedule = side_schedule(cfg_, side_);
    S.frames.push_back(trace_frame(sys_, schedule[0].t, cfg_));
    for (auto& p : S.frames[0].problems) result_.problems.push_back(p);
    const Frame& f0 = S.frames[0];
    for (std::size_t i = 0; i < f0.components.size(); ++i) {
      Track tr;
      tr.side = side_;
      tr.components.push_back(static_cast<int>(i));
      tr.through_infinity = f0.components[i].through_infinity();
      tr.size_history.emplace_back(f0.t, f0.components[i].chordal_diameter());
      S.tracks.push_back(std::move(tr));
      live_.push_back({true, f0.components[i]});
    }
    for (std::size_t k = 1; k < schedule.size(); ++k) step(S, schedule[k - 1].t, schedule[k]);
    for (std::size_t i = 0; i < S.tracks.size(); ++i) S.tracks[i].reaches_tail_end = live_[i].alive;
    return S;
  }

 private:
  struct Live {
    bool alive;
    Component current;
  };

  void problem(const std::string& s) { result_.problems.push_back(s); }

  void step(SweepSide& S, double t_old, const Schedule& next) {
    const double t_new = next.t;
    const std::size_t nt = S.tracks.size();
    std::vector<std::vector<Vec4>> hits(nt);
    std::vector<std::size_t> asked(nt, 0);
    std::vector<Vec4> seeds;
    for (std::size_t i = 0; i < nt; ++i) {
      if (!live_[i].alive) continue;
      const Component& c = live_[i].current;
      const double move = c.closed ? std::min(0.2, 0.5 * c.chordal_diameter() + 1e-3) : 0.2;
      const auto samples = sample_points(c, 32);
      asked[i] = samples.size();
      for (const auto& x : samples) {
        auto y = correct_x(sys_, cfg_, t_new, predict(x, t_old, t_new, cfg_.chart_radius, next.tail), move);
        if (y) hits[i].push_back(*y);
      }
      for (std::size_t j = 0; j < std::min<std::size_t>(2, hits[i].size()); ++j) seeds.push_back(hits[i][j]);
    }

    Frame F = trace_frame(sys_, t_new, cfg_, seeds);
    F.uniform = next.uniform;
    for (auto& p : F.problems) problem(p);
    std::vector<std::vector<Vec5>> lines;
    for (const auto& c : F.components) lines.push_back(c.embedded());
    const std::size_t nc = F.components.size();

    // Votes: which new component each continued point landed on.
    std::vector<std::map<int, int>> votes(nt);
    std::vector<int> valid(nt, 0);
    for (std::size_t i = 0; i < nt; ++i) {
      for (const auto& y : hits[i]) {
        const Nearest n = nearest_component(sphere_embed(y), lines, F);
        if (n.index < 0 || n.d1 > 2e-3 || n.d1 > 0.25 * n.d2) continue;
        ++votes[i][n.index];
        ++valid[i];
      }
    }
    std::vector<int> target(nt, -1);
    std::vector<int> score(nt, 0);
    for (std::size_t i = 0; i < nt; ++i) {
      if (!live_[i].alive || votes[i].empty()) continue;
      auto best = std::max_element(votes[i].begin(), votes[i].end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
      const bool enough = valid[i] >= std::max<int>(3, static_cast<int>(asked[i] / 4));
      if (enough && best->second >= 0.6 * valid[i]) {
        target[i] = best->first;
        score[i] = best->second;
      }
      for (const auto& [c, n] : votes[i]) {
        if (c != best->first && enough && n >= 0.25 * valid[i]) {
          problem("track " + std::to_string(offset_ + static_cast<int>(i)) + " splits between t=" + fmt(t_old) +
                  " and t=" + fmt(t_new));
          result_.events.push_back(make_event(EventKind::Split, side_, t_old, t_new, offset_ + static_cast<int>(i),
                                              F.components[c].centroid()));
        }
      }
    }
    // One source per component: the best-supported claim wins.
    std::vector<int> owner(nc, -1);
    for (std::size_t i = 0; i < nt; ++i) {
      if (target[i] < 0) continue;
      int& o = owner[target[i]];
      if (o < 0 || score[i] > score[o]) {
        if (o >= 0) target[o] = -1;
        o = static_cast<int>(i);
      } else {
        target[i] = -1;
      }
    }

    // Unmatched tracks: pursue loops locally, else they are gone.
    for (std::size_t i = 0; i < nt; ++i) {
      if (!live_[i].alive || target[i] >= 0) continue;
      const int gid = offset_ + static_cast<int>(i);
      Track& tr = S.tracks[i];
      const Component& c = live_[i].current;
      if (!c.closed) {
        const bool absorbed = !votes[i].empty();
        problem("track " + std::to_string(gid) + " (an arc) lost between t=" + fmt(t_old) + " and t=" + fmt(t_new));
        result_.events.push_back(make_event(absorbed ? EventKind::Merge : EventKind::Death, side_, t_old, t_new, gid,
                                            c.centroid()));
        live_[i].alive = false;
        tr.end_event = static_cast<int>(result_.events.size()) - 1;
        continue;
      }
      if (auto L = pursue_loop(sys_, cfg_, c, t_new)) {
        int claim = -1;
        const auto probe = sample_points(*L, 16);
        for (std::size_t j = 0; j < nc && claim < 0; ++j) {
          if (owner[j] >= 0) continue;
          bool on = !probe.empty() && std::all_of(probe.begin(), probe.end(), [&](const Vec4& y) {
            return polyline_distance5(sphere_embed(y), lines[j], F.components[j].closed) < 2e-3;
          });
          if (on) claim = static_cast<int>(j);
        }
        if (claim >= 0) {
          owner[claim] = static_cast<int>(i);
          target[i] = claim;
        } else {
          tr.size_history.emplace_back(t_new, L->chordal_diameter());
          live_[i].current = std::move(*L);
        }
        continue;
      }
      Bisection b = bisect_disappearance(sys_, cfg_, c, t_old, t_new, tr);
      Vec4 where = b.last.centroid();
      result_.events.push_back(make_event(EventKind::Death, side_, b.t_lo, b.t_hi, gid, where));
      tr.end_event = static_cast<int>(result_.events.size()) - 1;
      live_[i].alive = false;
    }

    for (std::size_t j = 0; j < nc; ++j) {
      if (owner[j] >= 0) continue;
      problem("unexplained curve appears between t=" + fmt(t_old) + " and t=" + fmt(t_new));
      result_.events.push_back(make_event(EventKind::Birth, side_, t_old, t_new, -1, F.components[j].centroid()));
    }

    const std::size_t frame_index = S.frames.size();
    for (std::size_t i = 0; i < nt; ++i) {
      Track& tr = S.tracks[i];
      tr.components.resize(frame_index + 1, -1);
      if (!live_[i].alive || target[i] < 0) continue;
      tr.components[frame_index] = target[i];
      live_[i].current = F.components[target[i]];
      tr.size_history.emplace_back(t_new, live_[i].current.chordal_diameter());
    }
    S.frames.push_back(std::move(F));
  }

  const LocusSystem& sys_;
  const SweepConfig& cfg_;
  int side_;
  int offset_;
  SweepResult& result_;
  std::vector<Live> live_;
};

}  // namespace

SweepResult sweep(const LocusSystem& sys, const SweepConfig& cfg) {
  cfg.validate();
  SweepResult r;
  r.base = trace_frame(sys, cfg.base_time, cfg);
  r.base.uniform = true;
  for (auto& p : r.base.problems) r.problems.push_back(p);
  r.sides[0] = SideSweeper(sys, cfg, +1, 0, r).run();
  r.sides[1] = SideSweeper(sys, cfg, -1, static_cast<int>(r.sides[0].tracks.size()), r).run();
  // Known singular points are exact: their slices are pinch events.
  for (const auto& sp : cfg.singular_points) {
    if (sp.is_infinity()) continue;
    const Vec4 x = to_double(sp).coords();
    if (x[3] < cfg.t_min || x[3] > cfg.t_max) continue;
    Event e;
    e.kind = EventKind::Pinch;
    e.t_lo = e.t_hi = x[3];
    e.location = x;
    r.events.push_back(e);
  }
  return r;
}

}  // namespace twistor
