#include "itri/curve_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "itri/geometry.hpp"

namespace itri {

namespace {

long n_plus_total(const IntrinsicTriangulation& tri) {
  long s = 0;
  for (int e = 0; e < tri.mesh.edge_capacity(); ++e)
    if (tri.mesh.edge_alive(e)) s += n_plus(tri.normal[e]);
  return s;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

struct StepOut {
  bool done = false;
  CombinatorialCrossing next;
  int vertex = HalfedgeMesh::kInvalid;
};

// one move of the curve through the face beyond z
StepOut step(const IntrinsicTriangulation& tri, const CombinatorialCrossing& z) {
  const auto& m = tri.mesh;
  const int g = m.twin(z.halfedge);
  if (!m.interior(g)) throw MeshError("curve runs into the boundary", "halfedge", g);
  const int g1 = m.next(g), g2 = m.next(g1);
  const auto cc = tri.face_corner_counts(m.face(g));
  const int sg = m.face_slot(g);
  const int s1 = (sg + 1) % 3, s2 = (sg + 2) % 3;
  const int c_near = cc.c[s2];  // corner at tail(g1), where the entry and exit edges meet
  const int c_far = cc.c[s1];   // corner at tail(g)
  const int n_in = n_plus(tri.normal[m.edge(g)]);
  if (z.p < c_near) return {false, {g1, z.p}, HalfedgeMesh::kInvalid};
  if (z.p >= n_in - c_far) {
    const int n_out = n_plus(tri.normal[m.edge(g2)]);
    return {false, {g2, n_out + z.p - n_in}, HalfedgeMesh::kInvalid};
  }
  return {true, {}, m.tail(g2)};
}

}  // namespace

TraceResult trace_from(const IntrinsicTriangulation& tri, const CombinatorialCrossing& z) {
  const auto& m = tri.mesh;
  if (!m.halfedge_alive(z.halfedge)) throw MeshError("trace seed halfedge is dead");
  const int np = n_plus(tri.normal[m.edge(z.halfedge)]);
  if (z.p < 0 || z.p >= np) throw MeshError("trace seed index out of range");

  TraceResult out;
  out.crossings.push_back(z);
  long guard = n_plus_total(tri) + 2;
  while (true) {
    if (--guard < 0) throw MeshError("trace does not terminate, normal coordinates inconsistent");
    const StepOut s = step(tri, out.crossings.back());
    if (s.done) {
      out.terminal_vertex = s.vertex;
      return out;
    }
    out.crossings.push_back(s.next);
  }
}

CurveTrajectory extract_curve(const IntrinsicTriangulation& tri, const CombinatorialCrossing& z) {
  const auto& m = tri.mesh;
  const TraceResult fwd = trace_from(tri, z);
  const TraceResult bwd = trace_from(tri, reverse_crossing(m, tri.normal, z));

  CurveTrajectory out;
  out.start_vertex = bwd.terminal_vertex;
  out.end_vertex = fwd.terminal_vertex;

  std::vector<CombinatorialCrossing> chain;
  chain.reserve(fwd.crossings.size() + bwd.crossings.size() - 1);
  for (auto it = bwd.crossings.rbegin(); it != bwd.crossings.rend() - 1; ++it)
    chain.push_back(reverse_crossing(m, tri.normal, *it));
  chain.insert(chain.end(), fwd.crossings.begin(), fwd.crossings.end());
  const int K = static_cast<int>(chain.size());

  // unfold the strip, keeping the crossed edge endpoints per crossing
  std::vector<Eigen::Vector2d> A(K), B(K);
  out.strip.resize(K + 1);
  const int he0 = chain[0].halfedge;
  if (!m.interior(he0)) throw MeshError("curve strip touches the exterior");
  out.strip[0] = m.face(he0);
  A[0] = {0.0, 0.0};
  B[0] = {tri.lengths[m.edge(he0)], 0.0};
  const Eigen::Vector2d s_pos = place_apex(A[0], B[0], tri.lengths[m.edge(m.prev(he0))],
                                           tri.lengths[m.edge(m.next(he0))], true);
  Eigen::Vector2d e_pos = Eigen::Vector2d::Zero();
  for (int t = 0; t < K; ++t) {
    const int g = m.twin(chain[t].halfedge);
    if (!m.interior(g)) throw MeshError("curve strip touches the exterior");
    const int g1 = m.next(g), g2 = m.next(g1);
    out.strip[t + 1] = m.face(g);
    const Eigen::Vector2d apex =
        place_apex(B[t], A[t], tri.lengths[m.edge(g2)], tri.lengths[m.edge(g1)], true);
    if (t + 1 < K) {
      if (chain[t + 1].halfedge == g1) {
        A[t + 1] = A[t];
        B[t + 1] = apex;
      } else if (chain[t + 1].halfedge == g2) {
        A[t + 1] = apex;
        B[t + 1] = B[t];
      } else {
        throw MeshError("strip chain broken");
      }
    } else {
      e_pos = apex;
    }
  }

  constexpr double kDelta = 1e-12;
  const Eigen::Vector2d d = e_pos - s_pos;
  const double d2 = d.squaredNorm();
  out.crossings.reserve(K);
  for (int t = 0; t < K; ++t) {
    GeometricCrossing gc;
    gc.where = chain[t];
    if (d2 > 0.0) {
      const double den = cross2(B[t] - A[t], d);
      double v = den != 0.0 ? cross2(s_pos - A[t], d) / den : 0.5;
      if (!(v > 0.0 && v < 1.0) || den == 0.0) {
        v = std::clamp(std::isfinite(v) ? v : 0.5, kDelta, 1.0 - kDelta);
        gc.clamped = true;
      }
      gc.v = v;
      const Eigen::Vector2d P = A[t] + v * (B[t] - A[t]);
      double u = (P - s_pos).dot(d) / d2;
      if (!(u > 0.0 && u < 1.0)) {
        u = std::clamp(std::isfinite(u) ? u : 0.5, kDelta, 1.0 - kDelta);
        gc.clamped = true;
      }
      gc.u = u;
    } else {
      // endpoints landed on one another, geometry is gone but order survives
      gc.v = 0.5;
      gc.u = (t + 1.0) / (K + 1.0);
      gc.clamped = true;
    }
    if (gc.clamped) ++out.n_clamped;
    out.crossings.push_back(gc);
  }
  return out;
}

GeometricCrossing extract_geometric_crossing(const IntrinsicTriangulation& tri,
                                             const CombinatorialCrossing& z) {
  const CurveTrajectory tr = extract_curve(tri, z);
  for (const auto& gc : tr.crossings)
    if (gc.where == z) return gc;
  throw MeshError("crossing missing from its own trajectory");
}

namespace {

// one end of an input edge's path at a given vertex. Either the path leaves
// along a coincident edge, or it emanates into the corner at tail(halfedge)
// and first crosses (next(halfedge), rank).
struct PathEnd {
  bool shared = false;
  int halfedge = HalfedgeMesh::kInvalid;
  int rank = 0;
  bool operator==(const PathEnd&) const = default;
};

PathEnd start_end(const IntrinsicTriangulation& tri, int a, int k) {
  const auto& m = tri.mesh;
  const int deg = tri.input_degree(a);
  std::vector<PathEnd> matches;
  for (int h : m.outgoing_halfedges_ccw(a)) {
    const int nm = tri.normal[m.edge(h)];
    if (nm == -1 && tri.roundabout[h] == k) {
      matches.push_back({true, h, 0});
      continue;
    }
    if (!m.interior(h)) continue;
    const int rho = ((k - tri.roundabout[h]) % deg + deg) % deg - n_minus(nm);
    if (rho < 0) continue;
    const auto cc = tri.face_corner_counts(m.face(h));
    const int s = m.face_slot(h);
    if (rho < cc.e[(s + 1) % 3]) matches.push_back({false, h, cc.c[(s + 2) % 3] + rho});
  }
  if (matches.size() != 1)
    throw MeshError("roundabouts give no unique start for the edge", "vertex", a);
  return matches[0];
}

// at a split vertex the path has exactly two ends, drop the arrival and take
// the survivor
PathEnd continue_through(const IntrinsicTriangulation& tri, int p, const PathEnd& arrival) {
  const auto& m = tri.mesh;
  std::vector<PathEnd> ends;
  for (int h : m.outgoing_halfedges_ccw(p)) {
    if (tri.normal[m.edge(h)] == -1) ends.push_back({true, h, 0});
    if (!m.interior(h)) continue;
    const auto cc = tri.face_corner_counts(m.face(h));
    const int s = m.face_slot(h);
    const int e = cc.e[(s + 1) % 3];
    const int c = cc.c[(s + 2) % 3];
    for (int j = 0; j < e; ++j) ends.push_back({false, h, c + j});
  }
  const auto it = std::find(ends.begin(), ends.end(), arrival);
  if (ends.size() != 2 || it == ends.end())
    throw MeshError("vertex is not a through point of the edge", "vertex", p);
  return ends[it == ends.begin() ? 1 : 0];
}

struct WalkSegment {
  bool shared = false;
  int t1_edge = HalfedgeMesh::kInvalid;
  CombinatorialCrossing seed;
  TraceResult trace;
};

struct Walk {
  int a = 0, b = 0;
  std::vector<int> via;
  std::vector<WalkSegment> segments;
};

Walk walk_edge(const IntrinsicTriangulation& tri, int e0) {
  const auto& m = tri.mesh;
  const auto& im = tri.input();
  if (!im.edge_alive(e0)) throw MeshError("no such input edge", "edge", e0);
  const int h0 = im.halfedge_of_edge(e0);
  Walk w;
  w.a = im.tail(h0);
  w.b = im.head(h0);

  PathEnd cur = start_end(tri, w.a, tri.input_rotation(h0));
  long guard = n_plus_total(tri) + m.n_edges() + 2;
  while (true) {
    if (--guard < 0) throw MeshError("edge walk does not close", "edge", e0);
    int v_next;
    PathEnd arrival;
    if (cur.shared) {
      w.segments.push_back({true, m.edge(cur.halfedge), {}, {}});
      v_next = m.head(cur.halfedge);
      arrival = {true, m.twin(cur.halfedge), 0};
    } else {
      WalkSegment seg;
      seg.seed = {m.next(cur.halfedge), cur.rank};
      seg.trace = trace_from(tri, seg.seed);
      v_next = seg.trace.terminal_vertex;
      const auto& zl = seg.trace.crossings.back();
      const int g = m.twin(zl.halfedge);
      arrival = {false, m.next(m.next(g)), n_plus(tri.normal[m.edge(zl.halfedge)]) - zl.p - 1};
      w.segments.push_back(std::move(seg));
    }
    if (tri.is_input_vertex(v_next)) {
      if (v_next != w.b) throw MeshError("edge walk ended at the wrong vertex", "edge", e0);
      return w;
    }
    w.via.push_back(v_next);
    cur = continue_through(tri, v_next, arrival);
  }
}

}  // namespace

EdgeTrajectory extract_edge(const IntrinsicTriangulation& tri, int t0_edge) {
  Walk w = walk_edge(tri, t0_edge);
  EdgeTrajectory out;
  out.t0_edge = t0_edge;
  out.start_vertex = w.a;
  out.end_vertex = w.b;
  out.via_vertices = w.via;

  // split points carry their own parameter along the input edge
  std::vector<double> params;
  params.reserve(w.via.size() + 2);
  params.push_back(0.0);
  for (int p : w.via) {
    const SurfacePoint& sp = tri.vertex_positions[p];
    if (sp.kind != SimplexKind::Edge || sp.id != t0_edge)
      throw MeshError("split vertex strayed off the edge", "vertex", p);
    params.push_back(sp.edge_t());
  }
  params.push_back(1.0);

  for (size_t i = 0; i < w.segments.size(); ++i) {
    const double u0 = params[i], u1 = params[i + 1];
    if (w.segments[i].shared) {
      EdgeSegment seg;
      seg.shared = true;
      seg.t1_edge = w.segments[i].t1_edge;
      seg.u0 = u0;
      seg.u1 = u1;
      out.segments.push_back(std::move(seg));
      continue;
    }
    CurveTrajectory ct = extract_curve(tri, w.segments[i].seed);
    if (ct.crossings.size() != w.segments[i].trace.crossings.size())
      throw MeshError("geometric pass disagrees with the walk", "edge", t0_edge);
    out.n_clamped += ct.n_clamped;
    for (const auto& gc : ct.crossings) {
      GeometricCrossing scaled = gc;
      scaled.u = u0 + gc.u * (u1 - u0);
      out.crossings.push_back(scaled);
    }
    EdgeSegment seg;
    seg.shared = false;
    seg.curve = std::move(ct);
    seg.u0 = u0;
    seg.u1 = u1;
    out.segments.push_back(std::move(seg));
  }
  return out;
}

Eigen::VectorXi transpose_crossing_counts(const IntrinsicTriangulation& tri) {
  const auto& im = tri.input();
  Eigen::VectorXi out = Eigen::VectorXi::Zero(im.edge_capacity());
  for (int e0 = 0; e0 < im.edge_capacity(); ++e0) {
    if (!im.edge_alive(e0)) continue;
    const Walk w = walk_edge(tri, e0);
    for (const auto& seg : w.segments)
      if (!seg.shared) out[e0] += static_cast<int>(seg.trace.crossings.size());
  }
  return out;
}

}  // namespace itri
