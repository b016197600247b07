#pragma once

#include <Eigen/Core>
#include <vector>

#include "itri/geometry.hpp"
#include "itri/halfedge_mesh.hpp"
#include "itri/integer_coords.hpp"
#include "itri/surface_point.hpp"

namespace itri {

// A triangulation T sitting over a fixed input triangulation, sharing its
// vertex set (plus inserted vertices) and described by edge lengths, normal
// coordinates n, and roundabouts r. n[e] counts transversal crossings of edge
// e by input edges, with -1 marking an edge shared with the input; r[h] is
// the index of the first input halfedge at or counterclockwise after h around
// their common tail, defined when tail(h) is an input vertex.
class IntrinsicTriangulation {
 public:
  static IntrinsicTriangulation from_input(const HalfedgeMesh& input_mesh,
                                           const Eigen::VectorXd& input_lengths);

  // -- immutable input side ---------------------------------------------------
  const HalfedgeMesh& input() const { return input_; }
  const Eigen::VectorXd& input_lengths() const { return input_lengths_; }
  // ccw outgoing halfedges per input vertex, exterior one included
  const std::vector<int>& input_outgoing(int v0) const { return input_outgoing_[v0]; }
  int input_rotation(int h0) const { return input_rotation_[h0]; }
  int input_degree(int v0) const { return static_cast<int>(input_outgoing_[v0].size()); }

  // -- current triangulation --------------------------------------------------
  HalfedgeMesh mesh;
  Eigen::VectorXd lengths;    // by edge id
  Eigen::VectorXi normal;     // by edge id
  Eigen::VectorXi roundabout; // by halfedge id, valid where tail is an input vertex
  std::vector<SurfacePoint> vertex_positions;  // on the input triangulation

  bool is_input_vertex(int v) const { return v < static_cast<int>(input_vertex_count_); }
  int n_inserted_vertices() const;

  Eigen::Vector3d face_lengths(int f) const {
    const auto hs = mesh.face_halfedges(f);
    return {lengths[mesh.edge(hs[0])], lengths[mesh.edge(hs[1])], lengths[mesh.edge(hs[2])]};
  }
  CornerCounts face_corner_counts(int f) const {
    return corner_counts_for_face(mesh, normal, f);
  }
  // interior angle at tail(h) inside face(h)
  double corner_angle_at(int h) const;
  double vertex_angle_sum(int v) const;
  double total_area() const;

  // -- mutations --------------------------------------------------------------
  // Convexity test on the laid-out quadrilateral around edge e. The relaxed
  // form admits angles up to pi (plus tolerance) and exists for removal,
  // which must flip through flat configurations.
  bool is_flippable(int e, double tol = 1e-9, bool relaxed = false) const;

  // Flips e in place; ids survive, e connects the opposite corners after.
  // Returns false (mesh untouched) when is_flippable says no.
  bool flip_edge(int e, double tol = 1e-9, bool relaxed = false);

  struct FaceSplitResult {
    int new_vertex;
    std::array<int, 3> spokes;  // halfedges p->i, p->j, p->k
    bool position_degenerate = false;  // barycentric recovery hit a rank drop
  };
  // Inserts a vertex inside face f at barycentric u (entries > 0, sum 1).
  FaceSplitResult split_face(int f, const Eigen::Vector3d& u);

  struct EdgeSplitResult {
    int new_vertex;
    int he_ip, he_pj;  // along the split edge, i->p then p->j
    bool position_degenerate = false;
  };
  // Splits edge e at fraction t from the tail of its canonical halfedge.
  EdgeSplitResult split_edge(int e, double t);

  struct RemovalResult {
    bool removed = false;
    int flips = 0;
  };
  // Removes an inserted vertex by flipping its star down to degree 3
  // (interior) or 2 (boundary). Fails cleanly when the vertex is original or
  // the flip sequence cannot reduce the degree.
  RemovalResult remove_inserted_vertex(int v, int max_flip_factor = 10);

  struct MoveResult {
    bool moved = false;
    int new_vertex = -1;  // replacement id when moved
    int flips = 0;
  };
  // Relocates inserted vertex v by walking straight for tv from v, inserting
  // a vertex at the landing point, then removing v. Walks that leave the
  // surface reject the move and leave the triangulation untouched.
  MoveResult move_inserted_vertex(int v, const TangentVector& tv);

  MeshValidation validate() const;

  // input degree per current vertex, -1 on inserted ones (for validation)
  std::vector<int> vertex_input_degrees() const;

  // sized flags toggled by callers that want cheap per-mutation validation
  bool debug_validate = false;

 private:
  HalfedgeMesh input_;
  Eigen::VectorXd input_lengths_;
  std::vector<std::vector<int>> input_outgoing_;
  std::vector<int> input_rotation_;
  size_t input_vertex_count_ = 0;

  void grow_arrays();
  // split_face body; the edge-point form exists for split_edge, which puts u
  // on the boundary and immediately flips the degenerate edge away
  FaceSplitResult split_face_impl(int f, const Eigen::Vector3d& u, bool allow_edge_point);
  // roundabout of h from its clockwise neighbor, using current n
  int roundabout_from_cw(int h) const;
  void assign_roundabout(int h) { roundabout[h] = roundabout_from_cw(h); }
  void maybe_validate() const;

  friend struct IntrinsicOpsAccess;
};

// input faces whose closure holds the given input layer position, ascending
std::vector<int> input_faces_containing(const IntrinsicTriangulation& tri, const SurfacePoint& p);

}  // namespace itri
