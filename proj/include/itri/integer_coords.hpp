#pragma once

#include <Eigen/Core>
#include <array>

#include "itri/halfedge_mesh.hpp"

namespace itri {

// Crossing totals treat shared edges (n = -1) as uncrossed.
inline int n_plus(int n) { return n > 0 ? n : 0; }
// 1 when the edge coincides with an input edge, else 0.
inline int n_minus(int n) { return n == -1 ? 1 : 0; }

// Per-face curve bookkeeping derived from the normal coordinates of the three
// edges. Slot s refers to face_halfedges(f)[s]; counts are stored at the
// corner opposite slot s. With vertices (i, j, k) and slots (ij, jk, ki):
//   e[0] = e_k  curves emanating from k across ij
//   c[0] = c_k  curves cornering around k (entering jk, leaving ki)
// and cyclically for slots 1, 2.
struct CornerCounts {
  std::array<int, 3> e{};
  std::array<int, 3> c{};
};

// n0, n1, n2 are the raw normal coordinates at slots 0, 1, 2. Throws MeshError
// when the counts cannot come from a curve system (odd split or negative).
CornerCounts corner_counts(int n0, int n1, int n2);

CornerCounts corner_counts_for_face(const HalfedgeMesh& mesh, const Eigen::VectorXi& n, int f);

// One crossing along an oriented edge: the p-th intersection point counted
// from tail(halfedge), about to enter face(twin(halfedge)).
struct CombinatorialCrossing {
  int halfedge = HalfedgeMesh::kInvalid;
  int p = 0;
  bool operator==(const CombinatorialCrossing&) const = default;
};

CombinatorialCrossing reverse_crossing(const HalfedgeMesh& mesh, const Eigen::VectorXi& n,
                                       const CombinatorialCrossing& z);

// Diagnostic pass over (n, r). deg0[v] is the outgoing halfedge count of v in
// the input triangulation (counting one exterior halfedge at boundary
// vertices) or -1 when v was inserted later and carries no roundabouts.
MeshValidation validate_integer_coords(const HalfedgeMesh& mesh, const Eigen::VectorXi& n,
                                       const Eigen::VectorXi& r, const std::vector<int>& deg0);

}  // namespace itri
