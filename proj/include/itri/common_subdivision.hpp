#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <vector>

#include "itri/intrinsic_triangulation.hpp"

namespace itri {

// Overlay of the input triangulation and the current one. Vertices are the
// current vertices followed by one vertex per transversal crossing, ordered
// by current edge then by rank along that edge. Faces are the convex cells
// the input edges cut out of each current face, counterclockwise.
struct CommonSubdivision {
  std::vector<SurfacePoint> on_input;      // location on the input layer
  std::vector<SurfacePoint> on_intrinsic;  // location on the current layer
  std::vector<int> intrinsic_vertex;       // current vertex id, -1 for crossings

  std::vector<std::vector<int>> faces;  // ccw vertex loops, 3 to 6 corners
  std::vector<int> face_input;          // input face each cell lies in
  std::vector<int> face_intrinsic;      // current face each cell lies in
  // cell corners laid out in the frame of the containing current face
  std::vector<std::vector<Eigen::Vector2d>> corners2d;

  // compacted column order over alive current vertices, ascending by id
  std::vector<int> column_to_vertex;
  std::vector<int> vertex_to_column;  // -1 on dead slots

  int n_crossings = 0;

  int n_vertices() const { return static_cast<int>(on_input.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
};

// Builds the overlay by tracing every input edge. Throws MeshError when the
// trace disagrees with the stored crossing counts.
CommonSubdivision build_common_subdivision(const IntrinsicTriangulation& tri);

// Hat function weights of every overlay vertex on both triangulations. Rows
// are convex combinations of at most three parent vertices.
struct InterpolationMatrices {
  Eigen::SparseMatrix<double> onto_input;      // n_vertices by input vertices
  Eigen::SparseMatrix<double> onto_intrinsic;  // n_vertices by columns
};
InterpolationMatrices interpolation_matrices(const IntrinsicTriangulation& tri,
                                             const CommonSubdivision& S);

// Piecewise linear mass matrix over the overlay, cells fanned from their
// lowest numbered corner. Cells below a relative area floor fall back to a
// lumped contribution and are counted.
struct MassMatrix {
  Eigen::SparseMatrix<double> M;
  int lumped_faces = 0;
};
MassMatrix mass_matrix(const CommonSubdivision& S);

}  // namespace itri
