#include "itri/common_subdivision.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "itri/curve_extraction.hpp"
#include "itri/geometry.hpp"

namespace itri {

namespace {

// one transversal crossing, keyed by canonical rank along its current edge
struct CrossingSlot {
  int input_edge = -1;
  double u = 0.0;            // along the input edge
  double v = 0.0;            // along the current edge, canonical direction
  int listed_halfedge = -1;  // travel orientation recorded by the trace
  bool filled = false;
};

// a cell under construction: overlay vertex ids, layout corners, and which
// boundary pieces run along an input edge chord
struct Cell {
  std::vector<int> sid;
  std::vector<Eigen::Vector2d> p2;
  std::vector<int> slot;    // crossing slot per corner, -1 on real vertices
  std::vector<int> chords;  // piece sid[i] to sid[i+1] crosses the cell
};

class OverlayBuilder {
 public:
  OverlayBuilder(const IntrinsicTriangulation& tri, CommonSubdivision& S)
      : tri_(tri), m_(tri.mesh), im_(tri.input()), S_(S) {}

  void build() {
    index_vertices();
    trace_crossings();
    for (int f = 0; f < m_.face_capacity(); ++f)
      if (m_.face_alive(f)) emit_face(f);
  }

 private:
  const IntrinsicTriangulation& tri_;
  const HalfedgeMesh& m_;
  const HalfedgeMesh& im_;
  CommonSubdivision& S_;
  std::vector<int> first_slot_;
  std::vector<CrossingSlot> slots_;
  int base_ = 0;

  void index_vertices() {
    S_.vertex_to_column.assign(m_.vertex_capacity(), -1);
    for (int v = 0; v < m_.vertex_capacity(); ++v) {
      if (!m_.vertex_alive(v)) continue;
      S_.vertex_to_column[v] = static_cast<int>(S_.column_to_vertex.size());
      S_.column_to_vertex.push_back(v);
      S_.on_input.push_back(tri_.vertex_positions[v]);
      S_.on_intrinsic.push_back(SurfacePoint::vertex(Layer::Intrinsic, v));
      S_.intrinsic_vertex.push_back(v);
    }
    base_ = static_cast<int>(S_.on_input.size());
  }

  void trace_crossings() {
    first_slot_.assign(m_.edge_capacity(), -1);
    int total = 0;
    for (int e = 0; e < m_.edge_capacity(); ++e) {
      if (!m_.edge_alive(e)) continue;
      first_slot_[e] = total;
      total += std::max(0, tri_.normal[e]);
    }
    slots_.assign(total, {});
    S_.n_crossings = total;

    for (int e0 = 0; e0 < im_.edge_capacity(); ++e0) {
      if (!im_.edge_alive(e0)) continue;
      const EdgeTrajectory traj = extract_edge(tri_, e0);
      for (const GeometricCrossing& gc : traj.crossings) {
        const int h = gc.where.halfedge;
        const int e = m_.edge(h);
        const int n = tri_.normal[e];
        if (n <= 0) throw MeshError("trace crossed an edge that counts none", "edge", e);
        const bool fwd = h == m_.halfedge_of_edge(e);
        const int p = fwd ? gc.where.p : n - 1 - gc.where.p;
        if (p < 0 || p >= n) throw MeshError("crossing rank out of range", "edge", e);
        CrossingSlot& slot = slots_[first_slot_[e] + p];
        if (slot.filled) throw MeshError("two crossings claim one slot", "edge", e);
        slot.filled = true;
        slot.input_edge = e0;
        slot.u = gc.u;
        slot.v = fwd ? gc.v : 1.0 - gc.v;
        slot.listed_halfedge = h;
      }
    }
    for (const CrossingSlot& slot : slots_)
      if (!slot.filled) throw MeshError("edge counts a crossing no trace visited");

    for (int e = 0; e < m_.edge_capacity(); ++e) {
      if (!m_.edge_alive(e)) continue;
      for (int p = 0; p < std::max(0, tri_.normal[e]); ++p) {
        const CrossingSlot& slot = slots_[first_slot_[e] + p];
        S_.on_input.push_back(SurfacePoint::edge(Layer::Input, slot.input_edge, slot.u));
        S_.on_intrinsic.push_back(SurfacePoint::edge(Layer::Intrinsic, e, slot.v));
        S_.intrinsic_vertex.push_back(-1);
      }
    }
  }

  // curve travels into f here (rather than out of it)
  bool entering(int slot, int f) const {
    const int h = slots_[slot].listed_halfedge;
    if (m_.face(m_.twin(h)) == f) return true;
    if (m_.face(h) == f) return false;
    throw MeshError("crossing does not touch its face", "face", f);
  }

  // parent input face of the region left of a chord piece, given the slot of
  // a crossing on it and whether the piece runs with the traced direction
  int chord_parent(int slot, bool with_trajectory) const {
    const int h0 = im_.halfedge_of_edge(slots_[slot].input_edge);
    const int side = with_trajectory ? h0 : im_.twin(h0);
    if (!im_.interior(side))
      throw MeshError("overlay cell fell off the surface", "edge", slots_[slot].input_edge);
    return im_.face(side);
  }

  // containing input face of a cell with no chords, so a whole current face
  int plain_parent(int f, const std::array<int, 3>& hs) const {
    for (int s = 0; s < 3; ++s) {
      if (tri_.normal[m_.edge(hs[s])] != -1) continue;
      const int h = hs[s];
      const SurfacePoint& tp = tri_.vertex_positions[m_.tail(h)];
      if (tp.kind == SimplexKind::Vertex) {
        const int g0 = tri_.input_outgoing(tp.id)[tri_.roundabout[h]];
        if (!im_.interior(g0)) throw MeshError("shared edge runs outside the surface", "face", f);
        return im_.face(g0);
      }
      if (tp.kind != SimplexKind::Edge)
        throw MeshError("shared edge tail sits strictly inside a face", "face", f);
      const int h0 = im_.halfedge_of_edge(tp.id);
      const SurfacePoint& hp = tri_.vertex_positions[m_.head(h)];
      double t_head;
      if (hp.kind == SimplexKind::Vertex) {
        if (hp.id == im_.head(h0))
          t_head = 1.0;
        else if (hp.id == im_.tail(h0))
          t_head = 0.0;
        else
          throw MeshError("shared edge endpoints disagree about their input edge", "face", f);
      } else if (hp.kind == SimplexKind::Edge && hp.id == tp.id) {
        t_head = hp.edge_t();
      } else {
        throw MeshError("shared edge endpoints disagree about their input edge", "face", f);
      }
      const int side = t_head > tp.edge_t() ? h0 : im_.twin(h0);
      if (!im_.interior(side)) throw MeshError("shared edge runs outside the surface", "face", f);
      return im_.face(side);
    }
    std::vector<int> common =
        input_faces_containing(tri_, tri_.vertex_positions[m_.tail(hs[0])]);
    for (int s = 1; s < 3 && !common.empty(); ++s) {
      const auto other = input_faces_containing(tri_, tri_.vertex_positions[m_.tail(hs[s])]);
      std::vector<int> keep;
      std::set_intersection(common.begin(), common.end(), other.begin(), other.end(),
                            std::back_inserter(keep));
      common.swap(keep);
    }
    if (common.empty()) throw MeshError("no input face contains the cell", "face", f);
    return common.front();
  }

  int resolve_parent(const Cell& cell, int f, const std::array<int, 3>& hs) const {
    if (cell.chords.empty()) return plain_parent(f, hs);
    int parent = -1;
    const int n = static_cast<int>(cell.sid.size());
    for (int pos : cell.chords) {
      const int sp = cell.slot[pos], sq = cell.slot[(pos + 1) % n];
      bool with_trajectory;
      int slot;
      if (sp >= 0 && sq >= 0) {
        if (slots_[sp].input_edge != slots_[sq].input_edge)
          throw MeshError("chord endpoints trace different input edges", "face", f);
        const bool p_in = entering(sp, f), q_in = entering(sq, f);
        if (p_in == q_in) throw MeshError("chord enters twice or leaves twice", "face", f);
        with_trajectory = p_in;
        slot = sp;
      } else if (sp < 0) {
        slot = sq;
        with_trajectory = !entering(sq, f);
      } else {
        slot = sp;
        with_trajectory = entering(sp, f);
      }
      const int claim = chord_parent(slot, with_trajectory);
      if (parent >= 0 && claim != parent)
        throw MeshError("chords of one cell claim different input faces", "face", f);
      parent = claim;
    }
    return parent;
  }

  void emit_face(int f) {
    const auto hs = m_.face_halfedges(f);
    const auto cc = tri_.face_corner_counts(f);
    std::array<int, 3> C, E, np;
    std::array<bool, 3> fwd;
    for (int s = 0; s < 3; ++s) {
      C[s] = cc.c[(s + 1) % 3];
      E[s] = cc.e[(s + 1) % 3];
      const int e = m_.edge(hs[s]);
      np[s] = std::max(0, tri_.normal[e]);
      fwd[s] = hs[s] == m_.halfedge_of_edge(e);
    }
    const Eigen::Vector3d L = tri_.face_lengths(f);
    const Eigen::Matrix<double, 2, 3> P = layout_triangle(L[0], L[1], L[2]);

    auto slot_at = [&](int s, int q) {
      const int p = fwd[s] ? q : np[s] - 1 - q;
      if (p < 0 || p >= np[s]) throw MeshError("cell references a missing crossing", "face", f);
      return first_slot_[m_.edge(hs[s])] + p;
    };
    auto push_vertex = [&](Cell& cell, int s) {
      cell.sid.push_back(S_.vertex_to_column[m_.tail(hs[s])]);
      cell.p2.push_back(P.col(s));
      cell.slot.push_back(-1);
    };
    auto push_crossing = [&](Cell& cell, int s, int q) {
      const int slot = slot_at(s, q);
      const double w = fwd[s] ? slots_[slot].v : 1.0 - slots_[slot].v;
      cell.sid.push_back(base_ + slot);
      cell.p2.push_back(P.col(s) + w * (P.col((s + 1) % 3) - P.col(s)));
      cell.slot.push_back(slot);
    };
    // crossing with in-face rank q along hs[s], and its partner on the far
    // side of the corner at tail(hs[s])
    auto push_a = [&](Cell& cell, int s, int q) { push_crossing(cell, s, q); };
    auto push_b = [&](Cell& cell, int s, int q) {
      const int s2 = (s + 2) % 3;
      push_crossing(cell, s2, np[s2] - 1 - q);
    };
    auto finish = [&](Cell& cell) {
      S_.face_input.push_back(resolve_parent(cell, f, hs));
      S_.face_intrinsic.push_back(f);
      S_.faces.push_back(std::move(cell.sid));
      S_.corners2d.push_back(std::move(cell.p2));
    };

    int k = -1;
    for (int s = 0; s < 3; ++s)
      if (E[s] > 0) {
        if (k >= 0) throw MeshError("two corners claim emanating chords", "face", f);
        k = s;
      }

    // stacks of chords cutting each corner off, innermost first
    for (int s = 0; s < 3; ++s) {
      for (int q = 0; q < C[s]; ++q) {
        Cell cell;
        if (q == 0) {
          push_vertex(cell, s);
          push_a(cell, s, 0);
          push_b(cell, s, 0);
          cell.chords = {1};
        } else {
          push_a(cell, s, q - 1);
          push_a(cell, s, q);
          push_b(cell, s, q);
          push_b(cell, s, q - 1);
          cell.chords = {1, 3};
        }
        finish(cell);
      }
    }

    if (k < 0) {
      // central cell bounded by the innermost chord of each cut corner
      Cell cell;
      for (int s = 0; s < 3; ++s) {
        if (C[s] > 0) {
          cell.chords.push_back(static_cast<int>(cell.sid.size()));
          push_b(cell, s, C[s] - 1);
          push_a(cell, s, C[s] - 1);
        } else {
          push_vertex(cell, s);
        }
      }
      finish(cell);
      return;
    }

    // fan of chords emanating from corner k through the opposite edge
    const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
    auto push_x = [&](Cell& cell, int q) { push_crossing(cell, k1, C[k1] + q); };
    for (int q = 0; q + 1 < E[k]; ++q) {
      Cell cell;
      push_vertex(cell, k);
      push_x(cell, q);
      push_x(cell, q + 1);
      cell.chords = {0, 2};
      finish(cell);
    }
    {
      Cell cell;
      push_vertex(cell, k);
      if (C[k1] > 0) {
        cell.chords = {1, 3};
        push_b(cell, k1, C[k1] - 1);
        push_a(cell, k1, C[k1] - 1);
      } else {
        cell.chords = {2};
        push_vertex(cell, k1);
      }
      push_x(cell, 0);
      finish(cell);
    }
    {
      Cell cell;
      push_vertex(cell, k);
      push_x(cell, E[k] - 1);
      if (C[k2] > 0) {
        cell.chords = {0, 2};
        push_b(cell, k2, C[k2] - 1);
        push_a(cell, k2, C[k2] - 1);
      } else {
        cell.chords = {0};
        push_vertex(cell, k2);
      }
      finish(cell);
    }
  }
};

}  // namespace

CommonSubdivision build_common_subdivision(const IntrinsicTriangulation& tri) {
  CommonSubdivision S;
  OverlayBuilder builder(tri, S);
  builder.build();
  return S;
}

InterpolationMatrices interpolation_matrices(const IntrinsicTriangulation& tri,
                                             const CommonSubdivision& S) {
  const HalfedgeMesh& im = tri.input();
  const HalfedgeMesh& m = tri.mesh;
  std::vector<Eigen::Triplet<double>> t0, t1;
  for (int s = 0; s < S.n_vertices(); ++s) {
    const SurfacePoint& in = S.on_input[s];
    switch (in.kind) {
      case SimplexKind::Vertex:
        t0.emplace_back(s, in.id, 1.0);
        break;
      case SimplexKind::Edge: {
        const int h = im.halfedge_of_edge(in.id);
        if (in.bary[0] != 0.0) t0.emplace_back(s, im.tail(h), in.bary[0]);
        if (in.bary[1] != 0.0) t0.emplace_back(s, im.head(h), in.bary[1]);
        break;
      }
      case SimplexKind::Face: {
        const auto vs = im.face_vertices(in.id);
        for (int i = 0; i < 3; ++i)
          if (in.bary[i] != 0.0) t0.emplace_back(s, vs[i], in.bary[i]);
        break;
      }
    }
    const SurfacePoint& on = S.on_intrinsic[s];
    switch (on.kind) {
      case SimplexKind::Vertex:
        t1.emplace_back(s, S.vertex_to_column[on.id], 1.0);
        break;
      case SimplexKind::Edge: {
        const int h = m.halfedge_of_edge(on.id);
        if (on.bary[0] != 0.0) t1.emplace_back(s, S.vertex_to_column[m.tail(h)], on.bary[0]);
        if (on.bary[1] != 0.0) t1.emplace_back(s, S.vertex_to_column[m.head(h)], on.bary[1]);
        break;
      }
      case SimplexKind::Face:
        throw MeshError("overlay vertex floats inside a current face");
    }
  }
  InterpolationMatrices out;
  out.onto_input.resize(S.n_vertices(), im.vertex_capacity());
  out.onto_input.setFromTriplets(t0.begin(), t0.end());
  out.onto_intrinsic.resize(S.n_vertices(), static_cast<int>(S.column_to_vertex.size()));
  out.onto_intrinsic.setFromTriplets(t1.begin(), t1.end());
  return out;
}

MassMatrix mass_matrix(const CommonSubdivision& S) {
  std::vector<double> area(S.n_faces(), 0.0);
  double total = 0.0;
  for (int i = 0; i < S.n_faces(); ++i) {
    const auto& c2 = S.corners2d[i];
    const int n = static_cast<int>(c2.size());
    double twice = 0.0;
    for (int a = 0; a < n; ++a) {
      const int b = (a + 1) % n;
      twice += c2[a].x() * c2[b].y() - c2[b].x() * c2[a].y();
    }
    area[i] = 0.5 * twice;
    total += std::max(0.0, area[i]);
  }
  const double floor = 1e-14 * total;

  MassMatrix out;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < S.n_faces(); ++i) {
    const auto& ids = S.faces[i];
    const auto& c2 = S.corners2d[i];
    const int n = static_cast<int>(ids.size());
    if (area[i] <= floor) {
      ++out.lumped_faces;
      const double share = std::max(0.0, area[i]) / n;
      for (int c : ids) trip.emplace_back(c, c, share);
      continue;
    }
    const int m0 =
        static_cast<int>(std::min_element(ids.begin(), ids.end()) - ids.begin());
    for (int t = 1; t + 1 < n; ++t) {
      const int ia = m0, ib = (m0 + t) % n, ic = (m0 + t + 1) % n;
      const Eigen::Vector2d u = c2[ib] - c2[ia], w = c2[ic] - c2[ia];
      const double a = 0.5 * std::abs(u.x() * w.y() - u.y() * w.x());
      const std::array<int, 3> vs = {ids[ia], ids[ib], ids[ic]};
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          trip.emplace_back(vs[r], vs[c], a * (r == c ? 1.0 / 6.0 : 1.0 / 12.0));
    }
  }
  out.M.resize(S.n_vertices(), S.n_vertices());
  out.M.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace itri
