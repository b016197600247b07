#pragma once

#include <Eigen/Dense>
#include <vector>

#include "itri/intrinsic_triangulation.hpp"

namespace itri::testsupport {

struct FlatMesh {
  HalfedgeMesh mesh;
  std::vector<Eigen::Vector2d> pos;
  Eigen::VectorXd lengths;
};

// nx by ny vertex grid of unit squares, each square cut by its up-right
// diagonal. Vertex (row r, col c) has id r*nx + c and sits at (c, r).
FlatMesh flat_grid(int nx, int ny);

// Checks integer data against plain segment intersections in the plane. Reads
// connectivity and the caller supplied positions only, never normal
// coordinates, roundabouts or lengths, so disagreement points at the library.
class PlanarOracle {
 public:
  PlanarOracle(const IntrinsicTriangulation& tri, std::vector<Eigen::Vector2d> positions);

  // keep inserted vertices in sync as the test drives splits and moves
  void set_position(int v, const Eigen::Vector2d& p);
  const Eigen::Vector2d& position(int v) const { return pos_[v]; }

  int expected_normal(int t1_edge) const;
  Eigen::VectorXi expected_normals() const;            // -1 on dead edges too
  Eigen::VectorXi expected_crossing_counts() const;    // per input edge

  struct Hit {
    int t1_edge;
    double u;  // along the input edge, canonical halfedge direction
    double v;  // along the crossed edge, canonical halfedge direction
  };
  std::vector<Hit> crossings_of_input_edge(int e0) const;  // sorted by u
  std::vector<double> crossings_on_t1_edge(int e) const;   // sorted ascending

 private:
  const IntrinsicTriangulation& tri_;
  std::vector<Eigen::Vector2d> pos_;
};

}  // namespace itri::testsupport
