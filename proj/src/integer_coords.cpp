#include "itri/integer_coords.hpp"

#include <string>

namespace itri {

CornerCounts corner_counts(int n0, int n1, int n2) {
  const std::array<int, 3> np = {n_plus(n0), n_plus(n1), n_plus(n2)};
  CornerCounts cc;
  for (int s = 0; s < 3; ++s)
    cc.e[s] = std::max(0, np[s] - np[(s + 1) % 3] - np[(s + 2) % 3]);
  for (int s = 0; s < 3; ++s) {
    const int excess = std::max(0, np[(s + 1) % 3] + np[(s + 2) % 3] - np[s]) -
                       cc.e[(s + 1) % 3] - cc.e[(s + 2) % 3];
    if (excess < 0 || excess % 2 != 0)
      throw MeshError("normal coordinates (" + std::to_string(n0) + "," + std::to_string(n1) +
                      "," + std::to_string(n2) + ") do not describe a curve system");
    cc.c[s] = excess / 2;
  }
  // crossings of each edge split into the two near-corner groups + emanating
  for (int s = 0; s < 3; ++s)
    if (np[s] != cc.c[(s + 1) % 3] + cc.c[(s + 2) % 3] + cc.e[s])
      throw MeshError("normal coordinate matching failed at slot " + std::to_string(s));
  return cc;
}

CornerCounts corner_counts_for_face(const HalfedgeMesh& mesh, const Eigen::VectorXi& n, int f) {
  const auto hs = mesh.face_halfedges(f);
  return corner_counts(n[mesh.edge(hs[0])], n[mesh.edge(hs[1])], n[mesh.edge(hs[2])]);
}

CombinatorialCrossing reverse_crossing(const HalfedgeMesh& mesh, const Eigen::VectorXi& n,
                                       const CombinatorialCrossing& z) {
  return {mesh.twin(z.halfedge), n_plus(n[mesh.edge(z.halfedge)]) - z.p - 1};
}

MeshValidation validate_integer_coords(const HalfedgeMesh& mesh, const Eigen::VectorXi& n,
                                       const Eigen::VectorXi& r, const std::vector<int>& deg0) {
  auto fail = [](std::string msg) { return MeshValidation{false, std::move(msg)}; };

  for (int e = 0; e < mesh.edge_capacity(); ++e) {
    if (!mesh.edge_alive(e)) continue;
    if (n[e] < -1) return fail("normal coordinate below -1 on edge " + std::to_string(e));
    if (mesh.is_boundary_edge(e) && n[e] != -1)
      return fail("boundary edge " + std::to_string(e) + " must be shared (n = -1)");
  }
  for (int f = 0; f < mesh.face_capacity(); ++f) {
    if (!mesh.face_alive(f)) continue;
    try {
      corner_counts_for_face(mesh, n, f);
    } catch (const MeshError& err) {
      return fail("face " + std::to_string(f) + ": " + err.what());
    }
  }

  // roundabouts live on halfedges whose tail is an input vertex
  for (int v = 0; v < mesh.vertex_capacity(); ++v) {
    if (!mesh.vertex_alive(v) || deg0[v] < 0) continue;
    const int d0 = deg0[v];
    int interior_steps = 0;
    for (int h : mesh.outgoing_halfedges_ccw(v)) {
      if (r[h] < 0 || r[h] >= d0)
        return fail("roundabout out of range at halfedge " + std::to_string(h));
      // advancing ccw past the cw neighbor g covers g itself (when shared)
      // plus the curves leaving v inside the face between them
      const int g = mesh.next_outgoing_cw(h);
      if (!mesh.interior(g)) continue;  // no face between an exterior g and h
      const auto hs = mesh.face_halfedges(mesh.face(g));
      int slot = 0;
      while (hs[slot] != g) {
        ++slot;
        if (slot == 3) return fail("orbit face mismatch at vertex " + std::to_string(v));
      }
      const auto cc = corner_counts_for_face(mesh, n, mesh.face(g));
      // corner v = tail(g) is opposite the next slot's edge
      const int advance = n_minus(n[mesh.edge(g)]) + cc.e[(slot + 1) % 3];
      if ((r[g] + advance) % d0 != r[h])
        return fail("roundabout progression broken at halfedge " + std::to_string(h));
      interior_steps += advance;
    }
    if (!mesh.is_boundary_vertex(v)) {
      // full turn: the orbit passes every input halfedge exactly once
      if (interior_steps != d0)
        return fail("roundabout total at vertex " + std::to_string(v) + " is " +
                    std::to_string(interior_steps) + ", expected " + std::to_string(d0));
    }
  }
  return {};
}

}  // namespace itri
