#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "itri/curve_extraction.hpp"
#include "itri/exp_map.hpp"
#include "itri/geometry.hpp"
#include "itri/intrinsic_triangulation.hpp"

namespace itri {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// where one crossing sits on the input surface
struct CrossingRef {
  int t0_edge = -1;
  double t0_u = 0.0;  // along the input edge, 0 at its canonical tail
  double v = 0.0;     // along the crossed edge's canonical halfedge
};

// every crossing keyed by (edge, rank along the canonical halfedge)
using TransposeMap = std::map<std::pair<int, int>, CrossingRef>;

TransposeMap build_transpose_map(const IntrinsicTriangulation& tri) {
  TransposeMap out;
  const auto& m = tri.mesh;
  const auto& input = tri.input();
  for (int e0 = 0; e0 < input.edge_capacity(); ++e0) {
    if (!input.edge_alive(e0)) continue;
    const EdgeTrajectory traj = extract_edge(tri, e0);
    for (const auto& gc : traj.crossings) {
      const int h = gc.where.halfedge;
      const int e = m.edge(h);
      const bool canon = m.halfedge_of_edge(e) == h;
      const int rank = canon ? gc.where.p : n_plus(tri.normal[e]) - 1 - gc.where.p;
      out[{e, rank}] = {e0, gc.u, canon ? gc.v : 1.0 - gc.v};
    }
  }
  return out;
}

// one straight piece of an input edge inside a face layout
struct Chord {
  Eigen::Vector2d a, b;
  bool corner = false;      // cuts off the corner at corner_slot
  int corner_slot = 0;
  int slot_a = 0, slot_b = 0;  // emanating: corners of the crossed edge
  int t0_edge = -1;
  double t0_at_a = 0.0, t0_at_b = 0.0;  // input edge parameter at each end
};

struct FaceChords {
  std::array<int, 3> hs{};
  std::array<int, 3> np{};
  Eigen::Matrix<double, 2, 3> P;
  std::vector<Chord> chords;
};

FaceChords gather_chords(const IntrinsicTriangulation& tri, int f, const TransposeMap& tmap) {
  const auto& m = tri.mesh;
  FaceChords out;
  out.hs = m.face_halfedges(f);
  const Eigen::Vector3d L = tri.face_lengths(f);
  out.P = layout_triangle(L[0], L[1], L[2]);
  for (int s = 0; s < 3; ++s) out.np[s] = n_plus(tri.normal[m.edge(out.hs[s])]);
  const CornerCounts cc = tri.face_corner_counts(f);

  // crossing q along hs[s], rank measured from tail(hs[s])
  auto at = [&](int s, int q) -> std::pair<Eigen::Vector2d, CrossingRef> {
    const int h = out.hs[s];
    const int e = m.edge(h);
    const bool canon = m.halfedge_of_edge(e) == h;
    const int rank = canon ? q : out.np[s] - 1 - q;
    const auto it = tmap.find({e, rank});
    if (it == tmap.end()) throw MeshError("crossing missing from the transpose map", "edge", e);
    const CrossingRef& ref = it->second;
    const double v = canon ? ref.v : 1.0 - ref.v;
    const Eigen::Vector2d pos = out.P.col(s) + v * (out.P.col((s + 1) % 3) - out.P.col(s));
    return {pos, ref};
  };

  for (int s = 0; s < 3; ++s) {
    const int s1 = (s + 1) % 3, s2 = (s + 2) % 3;
    // curves cornering around tail(hs[s]): in through hs[s2], out through hs[s]
    for (int q = 0; q < cc.c[s1]; ++q) {
      const auto [pa, ra] = at(s2, out.np[s2] - 1 - q);
      const auto [pb, rb] = at(s, q);
      if (ra.t0_edge != rb.t0_edge)
        throw MeshError("corner crossings disagree about their input edge", "face", f);
      Chord ch;
      ch.a = pa;
      ch.b = pb;
      ch.corner = true;
      ch.corner_slot = s;
      ch.t0_edge = ra.t0_edge;
      ch.t0_at_a = ra.t0_u;
      ch.t0_at_b = rb.t0_u;
      out.chords.push_back(ch);
    }
    // curves emanating from tail(hs[s]) across the opposite edge
    const int fan = cc.e[s1];
    if (fan == 0) continue;
    const int w = m.tail(out.hs[s]);
    const int c_off = cc.c[s2];
    for (int q = 0; q < fan; ++q) {
      const auto [pb, rb] = at(s1, c_off + q);
      Chord ch;
      ch.a = out.P.col(s);
      ch.b = pb;
      ch.slot_a = s1;
      ch.slot_b = s2;
      ch.t0_edge = rb.t0_edge;
      ch.t0_at_b = rb.t0_u;
      if (tri.is_input_vertex(w)) {
        // fan position picks the input direction, the direction its end
        const int deg = tri.input_degree(w);
        const int nm = n_minus(tri.normal[m.edge(out.hs[s])]);
        const int g0 = tri.input_outgoing(w)[(tri.roundabout[out.hs[s]] + q + nm) % deg];
        if (tri.input().edge(g0) != rb.t0_edge)
          throw MeshError("fan direction disagrees with its crossing", "vertex", w);
        ch.t0_at_a = g0 == tri.input().halfedge_of_edge(rb.t0_edge) ? 0.0 : 1.0;
      } else {
        const SurfacePoint& sp = tri.vertex_positions[w];
        if (sp.kind != SimplexKind::Edge || sp.id != rb.t0_edge)
          throw MeshError("curve emanates from a vertex off its input edge", "vertex", w);
        ch.t0_at_a = sp.edge_t();
      }
      out.chords.push_back(ch);
    }
  }
  return out;
}

// each chord separates the split point from one or two face corners; the
// spokes toward those corners pick up a crossing
std::array<int, 3> vote_spoke_normals(const FaceChords& fc, const Eigen::Vector2d& U) {
  std::array<int, 3> n{0, 0, 0};
  for (const auto& ch : fc.chords) {
    const bool corner_side = cross2(ch.b - ch.a, U - ch.a) < 0.0;
    if (ch.corner) {
      if (corner_side) {
        ++n[(ch.corner_slot + 1) % 3];
        ++n[(ch.corner_slot + 2) % 3];
      } else {
        ++n[ch.corner_slot];
      }
    } else {
      // negative side holds slot_a's corner
      ++n[corner_side ? ch.slot_b : ch.slot_a];
    }
  }
  return n;
}

struct CellCorner {
  Eigen::Vector2d pos;
  bool cut = false;
  SurfacePoint sp;    // original corner descriptor when !cut
  int chord = -1;     // cutting chord when cut
  double t0_u = 0.0;  // input edge parameter at the cut
};

std::vector<CellCorner> face_corner_cell(const IntrinsicTriangulation& tri,
                                         const FaceChords& fc) {
  std::vector<CellCorner> poly(3);
  for (int s = 0; s < 3; ++s) {
    poly[s].pos = fc.P.col(s);
    poly[s].sp = tri.vertex_positions[tri.mesh.tail(fc.hs[s])];
  }
  return poly;
}

// input face under the split point, read off the cell around it
SurfacePoint locate_split_point(const IntrinsicTriangulation& tri, const FaceChords& fc,
                                const Eigen::Vector2d& U, bool* degenerate) {
  const auto& m = tri.mesh;
  const auto& input = tri.input();
  bool degen = false;

  // clip the face by every chord, keeping the split point's side
  std::vector<CellCorner> poly = face_corner_cell(tri, fc);
  for (int ci = 0; ci < static_cast<int>(fc.chords.size()); ++ci) {
    const auto& ch = fc.chords[ci];
    const Eigen::Vector2d ab = ch.b - ch.a;
    const double keep = cross2(ab, U - ch.a) < 0.0 ? -1.0 : 1.0;
    const int sz = static_cast<int>(poly.size());
    std::vector<double> d(sz);
    for (int i = 0; i < sz; ++i) d[i] = keep * cross2(ab, poly[i].pos - ch.a);
    std::vector<CellCorner> next;
    for (int i = 0; i < sz; ++i) {
      const int j = (i + 1) % sz;
      if (d[i] >= 0.0) next.push_back(poly[i]);
      // a corner exactly on the line is kept as is; only strictly straddling
      // edges get a cut, otherwise chords touching a corner leave zero length
      // duplicates there
      if ((d[i] > 0.0 && d[j] < 0.0) || (d[i] < 0.0 && d[j] > 0.0)) {
        CellCorner c;
        const double al = d[i] / (d[i] - d[j]);
        c.pos = poly[i].pos + al * (poly[j].pos - poly[i].pos);
        c.cut = true;
        c.chord = ci;
        const double nn = ab.squaredNorm();
        const double beta = nn > 0.0 ? (c.pos - ch.a).dot(ab) / nn : 0.0;
        c.t0_u = ch.t0_at_a + beta * (ch.t0_at_b - ch.t0_at_a);
        next.push_back(c);
      }
    }
    poly = std::move(next);
    if (poly.size() < 3) break;
  }
  if (poly.size() < 3) {
    // clipping collapsed numerically, fall back to the whole face
    degen = true;
    poly = face_corner_cell(tri, fc);
  }

  int f0 = -1;
  for (const auto& c : poly) {
    if (!c.cut) continue;
    const auto& ch = fc.chords[c.chord];
    if (ch.t0_at_a == ch.t0_at_b) continue;
    // orient the chord by increasing input parameter; its input face is on
    // the same side as the canonical halfedge's
    Eigen::Vector2d lo = ch.a, hi = ch.b;
    if (ch.t0_at_b < ch.t0_at_a) std::swap(lo, hi);
    const double side = cross2(hi - lo, U - lo);
    if (side == 0.0) degen = true;
    int h0 = input.halfedge_of_edge(ch.t0_edge);
    if (side < 0.0) h0 = input.twin(h0);
    if (!input.interior(h0)) throw MeshError("split point fell off the surface");
    f0 = input.face(h0);
    break;
  }
  if (f0 < 0) {
    for (const auto& c : poly) {
      if (!c.cut && c.sp.kind == SimplexKind::Face) {
        f0 = c.sp.id;
        break;
      }
    }
  }
  if (f0 < 0) {
    // chord-free cell holding an original corner: the roundabout of the
    // corner's halfedge names the input wedge the cell sits in
    for (int s = 0; s < 3; ++s) {
      const int w = m.tail(fc.hs[s]);
      if (!tri.is_input_vertex(w)) continue;
      const int h = fc.hs[s];
      const int deg = tri.input_degree(w);
      const int idx = n_minus(tri.normal[m.edge(h)])
                          ? tri.roundabout[h]
                          : (tri.roundabout[h] + deg - 1) % deg;
      const int g0 = tri.input_outgoing(w)[idx];
      if (!input.interior(g0)) continue;
      f0 = input.face(g0);
      break;
    }
  }
  if (f0 < 0) {
    // every corner sits on an input edge: intersect their face pairs
    std::set<int> common;
    bool first = true;
    for (const auto& c : poly) {
      if (c.cut || c.sp.kind != SimplexKind::Edge) continue;
      const int h0 = input.halfedge_of_edge(c.sp.id);
      std::set<int> adj;
      if (input.interior(h0)) adj.insert(input.face(h0));
      if (input.interior(input.twin(h0))) adj.insert(input.face(input.twin(h0)));
      if (first) {
        common = adj;
        first = false;
      } else {
        std::set<int> merged;
        std::set_intersection(common.begin(), common.end(), adj.begin(), adj.end(),
                              std::inserter(merged, merged.begin()));
        common = merged;
      }
    }
    if (!first && !common.empty()) f0 = *common.begin();
  }
  if (f0 < 0) throw MeshError("no input face found under the split point");

  // express every cell corner barycentrically in f0 and read U through them
  const auto fh0 = input.face_halfedges(f0);
  const auto fv0 = input.face_vertices(f0);
  auto edge_bary = [&](int e0, double t) -> Eigen::Vector3d {
    for (int s = 0; s < 3; ++s) {
      if (input.edge(fh0[s]) != e0) continue;
      const double tt = input.halfedge_of_edge(e0) == fh0[s] ? t : 1.0 - t;
      Eigen::Vector3d b = Eigen::Vector3d::Zero();
      b[s] = 1.0 - tt;
      b[(s + 1) % 3] = tt;
      return b;
    }
    throw MeshError("region corner's input edge is not on the located face", "edge", e0);
  };
  std::vector<RegionCorner> rc;
  rc.reserve(poly.size());
  for (const auto& c : poly) {
    RegionCorner r;
    r.v = c.pos;
    if (c.cut) {
      r.u = edge_bary(fc.chords[c.chord].t0_edge, c.t0_u);
    } else if (c.sp.kind == SimplexKind::Vertex) {
      int slot = -1;
      for (int s = 0; s < 3; ++s)
        if (fv0[s] == c.sp.id) {
          slot = s;
          break;
        }
      if (slot < 0) throw MeshError("region corner vertex is not on the located face");
      r.u = Eigen::Vector3d::Zero();
      r.u[slot] = 1.0;
    } else if (c.sp.kind == SimplexKind::Edge) {
      r.u = edge_bary(c.sp.id, c.sp.edge_t());
    } else {
      if (c.sp.id != f0)
        throw MeshError("region corners straddle two input faces", "face", f0);
      r.u = c.sp.bary;
    }
    rc.push_back(r);
  }
  bool rank_drop = false;
  Eigen::Vector3d b = recover_barycentric(rc, U, &rank_drop);
  degen |= rank_drop;
  b = b.cwiseMax(0.0);
  const double sum = b.sum();
  if (!(sum > 0.0)) throw MeshError("barycentric recovery collapsed", "face", f0);
  b /= sum;
  if (degenerate) *degenerate = degen;
  return SurfacePoint::face(Layer::Input, f0, b);
}

struct FlagGuard {
  bool& flag;
  bool saved;
  explicit FlagGuard(bool& f) : flag(f), saved(f) {}
  ~FlagGuard() { flag = saved; }
};

}  // namespace

IntrinsicTriangulation::FaceSplitResult IntrinsicTriangulation::split_face_impl(
    int f, const Eigen::Vector3d& u, bool allow_edge_point) {
  if (!mesh.face_alive(f)) throw MeshError("face split on a dead face", "face", f);
  for (int c = 0; c < 3; ++c)
    if (!std::isfinite(u[c]) || u[c] < 0.0)
      throw std::invalid_argument("face split weights must be finite and nonnegative");
  if (std::abs(u.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("face split weights must sum to one");
  const Eigen::Vector3d un = u / u.sum();
  const int zeros = static_cast<int>(un[0] == 0.0) + static_cast<int>(un[1] == 0.0) +
                    static_cast<int>(un[2] == 0.0);
  if (!allow_edge_point && zeros > 0)
    throw std::invalid_argument("face split point must be interior; split_edge handles edges");
  if (zeros > 1) throw std::invalid_argument("face split at a corner");

  const TransposeMap tmap = build_transpose_map(*this);
  const FaceChords fc = gather_chords(*this, f, tmap);
  const Eigen::Vector2d U = fc.P * un;
  const std::array<int, 3> n_new = vote_spoke_normals(fc, U);
  Eigen::Vector3d spoke_len;
  for (int s = 0; s < 3; ++s) spoke_len[s] = (U - fc.P.col(s)).norm();
  bool degen = false;
  const SurfacePoint where = locate_split_point(*this, fc, U, &degen);

  const auto raw = mesh.split_face_raw(fc.hs[0]);
  grow_arrays();
  FaceSplitResult out;
  out.new_vertex = raw.new_vertex;
  out.spokes = {raw.he_pi, raw.he_pj, raw.he_pk};
  out.position_degenerate = degen;
  for (int s = 0; s < 3; ++s) {
    const int e = mesh.edge(out.spokes[s]);
    lengths[e] = spoke_len[s];
    normal[e] = n_new[s];
  }
  vertex_positions[raw.new_vertex] = where;
  for (int s = 0; s < 3; ++s) {
    const int back = mesh.twin(out.spokes[s]);
    if (is_input_vertex(mesh.tail(back))) assign_roundabout(back);
  }
  if (!allow_edge_point) maybe_validate();
  return out;
}

IntrinsicTriangulation::FaceSplitResult IntrinsicTriangulation::split_face(
    int f, const Eigen::Vector3d& u) {
  return split_face_impl(f, u, false);
}

IntrinsicTriangulation::EdgeSplitResult IntrinsicTriangulation::split_edge(int e, double t) {
  if (!mesh.edge_alive(e)) throw MeshError("edge split on a dead edge", "edge", e);
  if (!std::isfinite(t) || !(t > 0.0 && t < 1.0))
    throw std::invalid_argument("edge split fraction must lie strictly inside (0,1)");
  int h = mesh.halfedge_of_edge(e);
  bool swapped = false;
  if (!mesh.interior(h)) {
    h = mesh.twin(h);
    t = 1.0 - t;
    swapped = true;
  }

  if (normal[e] >= 0) {
    // park the new vertex on the edge via a degenerate face split, then flip
    // the covered edge out of the way
    const int f = mesh.face(h);
    const int s = mesh.face_slot(h);
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    u[s] = 1.0 - t;
    u[(s + 1) % 3] = t;
    const auto fs = split_face_impl(f, u, true);
    if (!flip_edge(e, 1e-9, true))
      throw MeshError("covered edge refused to flip after the split", "edge", e);
    EdgeSplitResult out;
    out.new_vertex = fs.new_vertex;
    out.he_ip = mesh.twin(fs.spokes[s]);
    out.he_pj = fs.spokes[(s + 1) % 3];
    out.position_degenerate = fs.position_degenerate;
    maybe_validate();
    return out;
  }

  // the edge runs along an input edge; find where on it the vertex lands
  const int hn = mesh.next(h), hp = mesh.prev(h);
  const double len = lengths[e];

  // the input edge under the chain and its parameter at both endpoints
  int e0 = -1;
  double t_tail = 0.0, t_head = 0.0;
  {
    const int wt = mesh.tail(h);
    if (is_input_vertex(wt)) {
      const int g0 = input_outgoing(wt)[roundabout[h]];
      e0 = input_.edge(g0);
      t_tail = g0 == input_.halfedge_of_edge(e0) ? 0.0 : 1.0;
    } else {
      const SurfacePoint& sp = vertex_positions[wt];
      if (sp.kind != SimplexKind::Edge)
        throw MeshError("shared edge tail is not on an input edge", "vertex", wt);
      e0 = sp.id;
      t_tail = sp.edge_t();
    }
    const int wh = mesh.head(h);
    const int ht = mesh.twin(h);
    if (is_input_vertex(wh)) {
      const int g1 = input_outgoing(wh)[roundabout[ht]];
      if (e0 >= 0 && input_.edge(g1) != e0)
        throw MeshError("shared edge endpoints name different input edges", "edge", e);
      e0 = input_.edge(g1);
      t_head = g1 == input_.halfedge_of_edge(e0) ? 0.0 : 1.0;
    } else {
      const SurfacePoint& sp = vertex_positions[wh];
      if (sp.kind != SimplexKind::Edge || (e0 >= 0 && sp.id != e0))
        throw MeshError("shared edge head is not on its input edge", "vertex", wh);
      e0 = sp.id;
      t_head = sp.edge_t();
    }
    if (t_tail == t_head) throw MeshError("shared edge chain collapsed", "edge", e);
  }

  // spoke geometry on both sides, read before any mutation
  const Eigen::Matrix<double, 2, 3> Pf =
      layout_triangle(len, lengths[mesh.edge(hn)], lengths[mesh.edge(hp)]);
  const Eigen::Vector2d on_edge = (1.0 - t) * Pf.col(0) + t * Pf.col(1);
  const double l_pk = (Pf.col(2) - on_edge).norm();
  const int n_pk = std::max(n_plus(normal[mesh.edge(hn)]), n_plus(normal[mesh.edge(hp)]));
  double l_pl = 0.0;
  int n_pl = 0;
  const int ht = mesh.twin(h);
  if (mesh.interior(ht)) {
    const int gn = mesh.next(ht), gp = mesh.prev(ht);
    const Eigen::Matrix<double, 2, 3> Pg =
        layout_triangle(len, lengths[mesh.edge(gn)], lengths[mesh.edge(gp)]);
    const Eigen::Vector2d on_edge_g = t * Pg.col(0) + (1.0 - t) * Pg.col(1);
    l_pl = (Pg.col(2) - on_edge_g).norm();
    n_pl = std::max(n_plus(normal[mesh.edge(gn)]), n_plus(normal[mesh.edge(gp)]));
  }
  const int r_from_head = roundabout[ht];  // survives as the head-side chain half

  const auto raw = mesh.split_edge_raw(h);
  grow_arrays();
  const int p = raw.new_vertex;
  lengths[mesh.edge(raw.he_ip)] = t * len;
  normal[mesh.edge(raw.he_ip)] = -1;
  lengths[mesh.edge(raw.he_pj)] = (1.0 - t) * len;
  normal[mesh.edge(raw.he_pj)] = -1;
  lengths[mesh.edge(raw.he_pk)] = l_pk;
  normal[mesh.edge(raw.he_pk)] = n_pk;
  if (raw.he_pl != HalfedgeMesh::kInvalid) {
    lengths[mesh.edge(raw.he_pl)] = l_pl;
    normal[mesh.edge(raw.he_pl)] = n_pl;
  }
  vertex_positions[p] = SurfacePoint::edge(Layer::Input, e0, t_tail + t * (t_head - t_tail));
  // roundabouts: i->p keeps the old value, j->p inherits the old j->i one,
  // the spoke backs are read off their cw neighbors
  roundabout[mesh.twin(raw.he_pj)] = r_from_head;
  {
    const int back_k = mesh.twin(raw.he_pk);
    if (is_input_vertex(mesh.tail(back_k))) assign_roundabout(back_k);
    if (raw.he_pl != HalfedgeMesh::kInvalid) {
      const int back_l = mesh.twin(raw.he_pl);
      if (is_input_vertex(mesh.tail(back_l))) assign_roundabout(back_l);
    }
  }
  EdgeSplitResult out;
  out.new_vertex = p;
  out.he_ip = swapped ? mesh.twin(raw.he_pj) : raw.he_ip;
  out.he_pj = swapped ? mesh.twin(raw.he_ip) : raw.he_pj;
  maybe_validate();
  return out;
}

IntrinsicTriangulation::RemovalResult IntrinsicTriangulation::remove_inserted_vertex(
    int v, int max_flip_factor) {
  if (!mesh.vertex_alive(v)) throw MeshError("removing a dead vertex", "vertex", v);
  if (is_input_vertex(v)) throw MeshError("refusing to remove an input vertex", "vertex", v);
  const bool boundary = mesh.is_boundary_vertex(v);
  const int target = boundary ? 2 : 3;
  const int cap = max_flip_factor * mesh.degree(v);
  RemovalResult out;

  // a spoke flip leaves face (a, b, q) behind for good, q being the far end;
  // a flat quad corner at q would park a zero area face in the mesh
  constexpr double pi = 3.14159265358979323846;
  auto far_corner_ok = [&](int e) {
    const int h = mesh.halfedge_of_edge(e), t = mesh.twin(h);
    const double ang = mesh.tail(h) == v
                           ? corner_angle_at(t) + corner_angle_at(mesh.next(h))
                           : corner_angle_at(h) + corner_angle_at(mesh.next(t));
    return ang < pi * (1.0 - 1e-9);
  };
  // the triangle left when v finally goes, assuming spoke e is flipped now
  auto link_slack_after = [&](int e) {
    const int h = mesh.halfedge_of_edge(e), t = mesh.twin(h);
    const double l_ij = lengths[e];
    const double l_jk = lengths[mesh.edge(mesh.next(h))], l_ki = lengths[mesh.edge(mesh.prev(h))];
    const double l_il = lengths[mesh.edge(mesh.next(t))], l_lj = lengths[mesh.edge(mesh.prev(t))];
    const Eigen::Vector2d P_i{0.0, 0.0}, P_j{l_ij, 0.0};
    const Eigen::Vector2d P_k = place_apex(P_i, P_j, l_ki, l_jk, true);
    const Eigen::Vector2d P_l = place_apex(P_i, P_j, l_il, l_lj, false);
    const double ab = (P_k - P_l).norm();
    double s1 = -1.0, s2 = -1.0;
    for (int he : mesh.outgoing_halfedges_ccw(v)) {
      if (mesh.edge(he) == e || mesh.edge(mesh.prev(he)) == e) continue;
      if (s1 < 0.0)
        s1 = lengths[mesh.edge(mesh.next(he))];
      else
        s2 = lengths[mesh.edge(mesh.next(he))];
    }
    return std::max({ab - s1 - s2, s1 - ab - s2, s2 - ab - s1});
  };

  // flips may pass through flat quads, so per-flip validation is paused
  FlagGuard guard(debug_validate);
  debug_validate = false;
  while (mesh.degree(v) > target) {
    if (out.flips >= cap) return out;
    std::vector<int> cands;
    for (int he : mesh.outgoing_halfedges_ccw(v)) {
      const int e = mesh.edge(he);
      if (mesh.is_boundary_edge(e)) continue;
      if (is_flippable(e, 1e-9, true) && far_corner_ok(e)) cands.push_back(e);
    }
    if (cands.empty()) return out;
    std::sort(cands.begin(), cands.end());
    int pick = cands.front();
    if (!boundary && mesh.degree(v) == 4) {
      // this flip decides the link triangle the removal leaves, so steer
      // away from a flat one
      double best = std::numeric_limits<double>::infinity();
      for (int e : cands) {
        const double s = link_slack_after(e);
        if (s < best) {
          best = s;
          pick = e;
        }
      }
      if (!(best < 0.0)) return out;
    }
    if (!flip_edge(pick, 1e-9, true)) return out;
    ++out.flips;
  }
  try {
    if (boundary)
      mesh.remove_degree2_boundary_raw(v);
    else
      mesh.remove_degree3_interior_raw(v);
  } catch (const MeshError&) {
    return out;  // star too tangled to collapse, flips stay applied
  }
  out.removed = true;
  guard.flag = guard.saved;
  maybe_validate();
  return out;
}

IntrinsicTriangulation::MoveResult IntrinsicTriangulation::move_inserted_vertex(
    int v, const TangentVector& tv) {
  if (!mesh.vertex_alive(v)) throw MeshError("moving a dead vertex", "vertex", v);
  if (is_input_vertex(v)) throw MeshError("refusing to move an input vertex", "vertex", v);
  if (!std::isfinite(tv.magnitude) || tv.magnitude < 0.0)
    throw std::invalid_argument("move distance must be finite and nonnegative");
  const Eigen::Vector2d dir2 = tv.dir.head<2>();
  if (!(dir2.norm() > 0.0)) throw std::invalid_argument("move needs a direction");

  int h0 = mesh.halfedge_of_vertex(v);
  if (!mesh.interior(h0)) {
    for (int he : mesh.outgoing_halfedges_ccw(v))
      if (mesh.interior(he)) {
        h0 = he;
        break;
      }
  }
  const int f = mesh.face(h0);
  const int s = mesh.face_slot(h0);
  const Eigen::Vector3d L = face_lengths(f);
  const Eigen::Matrix<double, 2, 3> P = layout_triangle(L[0], L[1], L[2]);
  // rotate the vertex frame (reference halfedge along +x) into the face layout
  const Eigen::Vector2d ex = (P.col((s + 1) % 3) - P.col(s)).normalized();
  const Eigen::Vector2d d(ex.x() * dir2.x() - ex.y() * dir2.y(),
                          ex.y() * dir2.x() + ex.x() * dir2.y());
  Eigen::Vector3d b0 = Eigen::Vector3d::Zero();
  b0[s] = 1.0;
  const ExpResult walk = exponential_walk(*this, f, b0, d, tv.magnitude);
  if (walk.hit_boundary) return {};

  Eigen::Vector3d b = walk.point.bary.cwiseMax(1e-9);
  b /= b.sum();
  const FaceSplitResult fs = split_face(walk.point.id, b);
  MoveResult out;
  out.new_vertex = fs.new_vertex;
  const RemovalResult rr = remove_inserted_vertex(v);
  out.flips = rr.flips;
  out.moved = rr.removed;
  return out;
}

}  // namespace itri
