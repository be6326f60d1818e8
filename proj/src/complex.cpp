#include "twistor/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace twistor {

namespace {

using Vec4 = Eigen::Vector4d;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

// Embedded edge arcs with normalized cumulative length, for projection.
struct EdgeGeometry {
  std::vector<Vec5> pts;
  std::vector<double> u;  // in [0, 1]
};

struct Projection {
  int edge = -1;
  double u = 0;
};

Projection project(const Vec5& p, const std::vector<EdgeGeometry>& edges) {
  Projection best;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& g = edges[e];
    for (std::size_t i = 0; i + 1 < g.pts.size(); ++i) {
      const Vec5 d = g.pts[i + 1] - g.pts[i];
      const double l2 = d.squaredNorm();
      const double s = l2 > 0 ? std::clamp((p - g.pts[i]).dot(d) / l2, 0.0, 1.0) : 0.0;
      const double dist = (p - g.pts[i] - s * d).squaredNorm();
      if (dist < bd) {
        bd = dist;
        best.edge = static_cast<int>(e);
        best.u = g.u[i] + s * (g.u[i + 1] - g.u[i]);
      }
    }
  }
  return best;
}

struct Run {
  int edge;
  double progress;
};

// Collapses a cyclic sequence of runs: drops runs that cover less than `min`
// of their edge and merges neighbours on the same edge and direction.
std::vector<Run> clean_runs(std::vector<Run> runs, double min) {
  std::vector<Run> kept;
  for (const auto& r : runs) {
    if (std::abs(r.progress) >= min) kept.push_back(r);
  }
  std::vector<Run> merged;
  for (const auto& r : kept) {
    if (!merged.empty() && merged.back().edge == r.edge && (merged.back().progress > 0) == (r.progress > 0)) {
      merged.back().progress += r.progress;
    } else {
      merged.push_back(r);
    }
  }
  while (merged.size() > 1 && merged.front().edge == merged.back().edge &&
         (merged.front().progress > 0) == (merged.back().progress > 0)) {
    merged.front().progress += merged.back().progress;
    merged.pop_back();
  }
  return merged;
}

}  // namespace

CellComplex build_complex(const SweepResult& sw, const SweepConfig& cfg) {
  CellComplex cx;
  for (const auto& p : sw.problems) cx.problems.push_back("sweep: " + p);

  // Stop indices of the traces refer to the finite singular points in order.
  std::vector<int> finite_index;
  int infinity_index = -1;
  for (std::size_t i = 0; i < cfg.singular_points.size(); ++i) {
    if (cfg.singular_points[i].is_infinity()) {
      infinity_index = static_cast<int>(i);
    } else {
      finite_index.push_back(static_cast<int>(i));
    }
  }

  std::vector<int> vertex_of_singular(cfg.singular_points.size(), -1);
  auto singular_vertex = [&](int si) {
    if (vertex_of_singular[si] < 0) {
      CellComplex::Vertex v;
      const auto& p = cfg.singular_points[si];
      if (!p.is_infinity()) v.point = to_double(p).coords();
      v.kind = VertexKind::Pinch;
      v.singular_index = si;
      vertex_of_singular[si] = static_cast<int>(cx.vertices.size());
      cx.vertices.push_back(v);
    }
    return vertex_of_singular[si];
  };
  auto saddle_vertex = [&](const Vec4& x) {
    for (std::size_t i = 0; i < cx.vertices.size(); ++i) {
      const auto& v = cx.vertices[i];
      if (v.kind == VertexKind::Saddle && v.point && (*v.point - x).norm() < 1e-6 * (1 + x.norm())) {
        return static_cast<int>(i);
      }
    }
    cx.vertices.push_back({x, VertexKind::Saddle, -1});
    return static_cast<int>(cx.vertices.size()) - 1;
  };

  // G0: vertices and edges from the base slice.
  for (const auto& comp : sw.base.components) {
    CellComplex::Edge e;
    e.arc = comp.points;
    if (comp.closed) {
      const auto first = std::find_if(comp.points.begin(), comp.points.end(), [](const SpherePoint& p) { return p.has_value(); });
      if (first == comp.points.end()) {
        cx.problems.push_back("base slice: empty closed curve");
        continue;
      }
      std::rotate(e.arc.begin(), e.arc.begin() + (first - comp.points.begin()), e.arc.end());
      e.arc.push_back(e.arc.front());
      cx.vertices.push_back({e.arc.front(), VertexKind::Artificial, -1});
      e.v0 = e.v1 = static_cast<int>(cx.vertices.size()) - 1;
      cx.edges.push_back(std::move(e));
      continue;
    }
    int ends[2] = {-1, -1};
    bool ok = true;
    for (int k = 0; k < 2; ++k) {
      const CurveEnd& end = comp.ends[k];
      if (end.reason == Termination::StopPoint) {
        const int si = end.stop_index == -2 ? infinity_index
                       : end.stop_index >= 0 && end.stop_index < static_cast<int>(finite_index.size())
                           ? finite_index[end.stop_index]
                           : -1;
        if (si < 0) {
          ok = false;
          break;
        }
        ends[k] = singular_vertex(si);
        const auto& at = cx.vertices[ends[k]].point;
        if (at) {
          if (k == 0) {
            e.arc.insert(e.arc.begin(), at);
          } else {
            e.arc.push_back(at);
          }
        }
      } else if (end.reason == Termination::Bifurcation) {
        const SpherePoint& p = k == 0 ? comp.points.front() : comp.points.back();
        if (!p) {
          ok = false;
          break;
        }
        ends[k] = saddle_vertex(*p);
      } else {
        ok = false;
        break;
      }
    }
    if (!ok) {
      cx.problems.push_back("base slice: curve with an end that is not a vertex");
      continue;
    }
    e.v0 = ends[0];
    e.v1 = ends[1];
    cx.edges.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < cx.vertices.size(); ++i) {
    if (cx.vertices[i].kind == VertexKind::Pinch) cx.pinch_vertices.push_back(static_cast<int>(i));
  }

  std::vector<EdgeGeometry> geo;
  for (const auto& e : cx.edges) {
    EdgeGeometry g;
    for (const auto& p : e.arc) g.pts.push_back(sphere_embed(p));
    g.u.assign(g.pts.size(), 0.0);
    for (std::size_t i = 1; i < g.pts.size(); ++i) g.u[i] = g.u[i - 1] + (g.pts[i] - g.pts[i - 1]).norm();
    const double total = g.u.empty() ? 0 : g.u.back();
    for (auto& u : g.u) u = total > 0 ? u / total : 0;
    geo.push_back(std::move(g));
  }

  // Faces: near-base components projected onto G0.
  int offset = 0;
  for (const auto& S : sw.sides) {
    if (S.frames.empty()) continue;
    const Frame& f = S.frames.front();
    std::vector<int> uses(cx.edges.size(), 0);
    for (std::size_t i = 0; i < f.components.size(); ++i) {
      const Component& comp = f.components[i];
      const int track = offset + static_cast<int>(i);
      const std::string name = "face of track " + std::to_string(track);
      std::vector<Projection> seq;
      for (const auto& p : comp.points) seq.push_back(project(sphere_embed(p), geo));
      if (seq.empty() || geo.empty()) {
        cx.problems.push_back(name + ": nothing to project");
        continue;
      }
      // Start a closed curve at a change of edge so no run wraps around.
      if (comp.closed) {
        std::size_t s = 0;
        while (s < seq.size() && seq[s].edge == seq.back().edge) ++s;
        if (s < seq.size()) std::rotate(seq.begin(), seq.begin() + static_cast<long>(s), seq.end());
      }
      std::vector<Run> runs;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        if (runs.empty() || runs.back().edge != seq[k].edge) {
          runs.push_back({seq[k].edge, 0.0});
          continue;
        }
        double du = seq[k].u - seq[k - 1].u;
        const auto& e = cx.edges[seq[k].edge];
        if (e.v0 == e.v1) du -= std::round(du);  // loop edges wrap at their vertex
        runs.back().progress += du;
      }
      if (comp.closed && seq.size() > 1 && seq.front().edge == seq.back().edge && runs.size() == 1) {
        double du = seq.front().u - seq.back().u;
        const auto& e = cx.edges[seq.front().edge];
        if (e.v0 == e.v1) du -= std::round(du);
        runs.back().progress += du;
      }
      runs = clean_runs(clean_runs(runs, 0.1), 0.3);

      CellComplex::Face face;
      face.side = S.side;
      face.track = track;
      for (const auto& r : runs) face.boundary.push_back({r.edge, r.progress > 0});
      if (face.boundary.empty()) {
        cx.problems.push_back(name + ": empty boundary");
        continue;
      }
      // Consecutive edge uses must meet at a vertex (cyclically).
      const std::size_t n = face.boundary.size();
      for (std::size_t k = 0; k < n; ++k) {
        const auto& a = face.boundary[k];
        const auto& b = face.boundary[(k + 1) % n];
        const int head = a.forward ? cx.edges[a.edge].v1 : cx.edges[a.edge].v0;
        const int tail = b.forward ? cx.edges[b.edge].v0 : cx.edges[b.edge].v1;
        if (head != tail) {
          cx.problems.push_back(name + ": boundary walk breaks between edges " + std::to_string(a.edge) + " and " +
                                std::to_string(b.edge));
        }
      }
      for (const auto& u : face.boundary) ++uses[u.edge];
      cx.faces.push_back(std::move(face));
    }
    for (std::size_t e = 0; e < uses.size(); ++e) {
      if (uses[e] != 1) {
        cx.problems.push_back("edge " + std::to_string(e) + " bounds " + std::to_string(uses[e]) +
                              " faces on the side " + (S.side > 0 ? "above" : "below") + " the base slice");
      }
    }

    // Faces must sweep open disks: every track ends in a death or shrinks
    // into infinity.
    const bool infinity_is_vertex = infinity_index >= 0 && vertex_of_singular[infinity_index] >= 0;
    for (std::size_t i = 0; i < S.tracks.size(); ++i) {
      const Track& tr = S.tracks[i];
      const std::string name = "track " + std::to_string(offset + static_cast<int>(i));
      if (tr.end_event >= 0) {
        const auto k = sw.events[tr.end_event].kind;
        if (k != EventKind::Death && k != EventKind::Birth) cx.problems.push_back(name + " does not end in a disk");
        continue;
      }
      if (!tr.reaches_tail_end) {
        cx.problems.push_back(name + " has no recorded end");
        continue;
      }
      const auto& h = tr.size_history;
      const bool shrinking = h.size() >= 3 && h[h.size() - 1].second < h[h.size() - 2].second &&
                             h[h.size() - 2].second < h[h.size() - 3].second;
      if (!shrinking) cx.problems.push_back(name + " is still alive at the end of the tail and not shrinking");
      if (!tr.through_infinity && infinity_is_vertex) {
        cx.problems.push_back(name + " shrinks into infinity, which is also a vertex");
      }
    }
    offset += static_cast<int>(S.tracks.size());
  }
  return cx;
}

long euler_characteristic(long v, long e, long f) { return v - e + f; }

long euler_characteristic(const CellComplex& c) {
  return euler_characteristic(static_cast<long>(c.vertices.size()), static_cast<long>(c.edges.size()),
                              static_cast<long>(c.faces.size()));
}

PinchReport pinch_analysis(const CellComplex& c) {
  PinchReport rep;
  const std::size_t ne = c.edges.size(), nv = c.vertices.size();
  // Half-edge 2e is edge e at v0, 2e + 1 at v1.
  auto vertex_of = [&](std::size_t h) {
    const auto& e = c.edges[h / 2];
    return static_cast<std::size_t>(h % 2 == 0 ? e.v0 : e.v1);
  };
  UnionFind link(2 * ne);
  std::vector<int> degree(2 * ne, 0);
  for (const auto& f : c.faces) {
    const std::size_t n = f.boundary.size();
    for (std::size_t k = 0; k < n; ++k) {
      const auto& a = f.boundary[k];
      const auto& b = f.boundary[(k + 1) % n];
      const std::size_t in = 2 * a.edge + (a.forward ? 1 : 0);
      const std::size_t out = 2 * b.edge + (b.forward ? 0 : 1);
      link.unite(in, out);
      ++degree[in];
      ++degree[out];
    }
  }
  for (std::size_t h = 0; h < 2 * ne; ++h) {
    if (degree[h] != 2) {
      rep.problems.push_back("half-edge " + std::to_string(h) + " has " + std::to_string(degree[h]) +
                             " face corners (expected 2)");
    }
  }

  // One copy of each vertex per link component.
  std::vector<std::vector<std::size_t>> roots(nv);
  for (std::size_t h = 0; h < 2 * ne; ++h) {
    auto& r = roots[vertex_of(h)];
    const std::size_t root = link.find(h);
    if (std::find(r.begin(), r.end(), root) == r.end()) r.push_back(root);
  }
  std::vector<std::size_t> copy_base(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) copy_base[v + 1] = copy_base[v] + std::max<std::size_t>(1, roots[v].size());
  const std::size_t ncopies = copy_base[nv];
  auto copy_of = [&](std::size_t h) {
    const std::size_t v = vertex_of(h);
    const auto& r = roots[v];
    return copy_base[v] + static_cast<std::size_t>(std::find(r.begin(), r.end(), link.find(h)) - r.begin());
  };
  std::vector<bool> pinch_copy(ncopies, false);
  for (std::size_t v = 0; v < nv; ++v) {
    if (roots[v].size() > 1) {
      rep.pinch_vertices.push_back(static_cast<int>(v));
      rep.sheets_per_pinch.push_back(static_cast<int>(roots[v].size()));
      for (std::size_t k = 0; k < roots[v].size(); ++k) pinch_copy[copy_base[v] + k] = true;
    }
  }

  // Connectivity before the split.
  {
    UnionFind uf(nv);
    for (const auto& e : c.edges) uf.unite(e.v0, e.v1);
    std::set<std::size_t> comps;
    for (std::size_t v = 0; v < nv; ++v) comps.insert(uf.find(v));
    rep.connected = comps.size() == 1;
  }

  // Components after the split.
  UnionFind uf(ncopies);
  for (std::size_t e = 0; e < ne; ++e) uf.unite(copy_of(2 * e), copy_of(2 * e + 1));
  std::vector<std::size_t> ids;
  for (std::size_t k = 0; k < ncopies; ++k) {
    const std::size_t r = uf.find(k);
    if (std::find(ids.begin(), ids.end(), r) == ids.end()) ids.push_back(r);
  }
  auto comp_of_copy = [&](std::size_t k) {
    return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), uf.find(k)) - ids.begin());
  };
  std::vector<long> V(ids.size(), 0), E(ids.size(), 0), F(ids.size(), 0);
  std::vector<int> B(ids.size(), 0);
  for (std::size_t k = 0; k < ncopies; ++k) {
    ++V[comp_of_copy(k)];
    if (pinch_copy[k]) ++B[comp_of_copy(k)];
  }
  for (std::size_t e = 0; e < ne; ++e) ++E[comp_of_copy(copy_of(2 * e))];
  std::vector<std::size_t> face_comp;
  for (const auto& f : c.faces) {
    const std::size_t k = f.boundary.empty() ? 0 : comp_of_copy(copy_of(2 * f.boundary.front().edge));
    face_comp.push_back(k);
    ++F[k];
  }

  // Orientability: adjacent faces must run through a shared edge in
  // opposite directions once each face is given an orientation.
  std::vector<std::vector<std::pair<std::size_t, bool>>> users(ne);
  for (std::size_t fi = 0; fi < c.faces.size(); ++fi) {
    for (const auto& u : c.faces[fi].boundary) users[u.edge].push_back({fi, u.forward});
  }
  std::vector<int> orient(c.faces.size(), 0);
  std::vector<bool> comp_orientable(ids.size(), true);
  for (std::size_t start = 0; start < c.faces.size(); ++start) {
    if (orient[start]) continue;
    orient[start] = 1;
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
      const std::size_t fi = stack.back();
      stack.pop_back();
      for (const auto& u : c.faces[fi].boundary) {
        const auto& us = users[u.edge];
        if (us.size() != 2) continue;
        for (std::size_t j = 0; j < 2; ++j) {
          const auto& me = us[j];
          const auto& other = us[1 - j];
          if (me.first != fi || me.second != u.forward) continue;
          // orient[other] * dir(other) == -orient[me] * dir(me)
          const int want = -orient[fi] * (me.second ? 1 : -1) * (other.second ? 1 : -1);
          if (!orient[other.first]) {
            orient[other.first] = want;
            stack.push_back(other.first);
          } else if (orient[other.first] != want) {
            comp_orientable[face_comp[fi]] = false;
          }
          break;
        }
      }
    }
  }

  for (std::size_t k = 0; k < ids.size(); ++k) {
    SurfaceComponent s;
    s.boundaries = B[k];
    s.chi = euler_characteristic(V[k], E[k], F[k]) - B[k];
    s.orientable = comp_orientable[k];
    const long twice = 2 - s.chi - s.boundaries;
    if (s.orientable) {
      if (twice < 0 || twice % 2 != 0) rep.problems.push_back("component " + std::to_string(k) + " has no orientable genus");
      s.genus = static_cast<int>(twice / 2);
    } else {
      s.genus = static_cast<int>(twice);  // number of cross-caps
    }
    rep.components.push_back(s);
  }
  return rep;
}

}  // namespace twistor
