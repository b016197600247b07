#pragma once

#include <vector>

#include "itri/integer_coords.hpp"
#include "itri/intrinsic_triangulation.hpp"

namespace itri {

// Combinatorial walk along one input curve, seed first. The walk stops at the
// vertex the curve terminates at.
struct TraceResult {
  std::vector<CombinatorialCrossing> crossings;
  int terminal_vertex = HalfedgeMesh::kInvalid;
};

TraceResult trace_from(const IntrinsicTriangulation& tri, const CombinatorialCrossing& z);

struct GeometricCrossing {
  CombinatorialCrossing where;
  double v = 0.0;        // along the crossed halfedge, measured from its tail
  double u = 0.0;        // along the whole curve
  bool clamped = false;  // intersection fell outside (0,1) and was pushed back in
};

struct CurveTrajectory {
  int start_vertex = HalfedgeMesh::kInvalid;
  int end_vertex = HalfedgeMesh::kInvalid;
  std::vector<int> strip;  // faces the curve passes through, crossings + 1 of them
  std::vector<GeometricCrossing> crossings;  // u strictly increasing
  int n_clamped = 0;
};

// Traces both ways from z, lays the strip out flat and intersects the straight
// segment between the endpoints with every crossed edge.
CurveTrajectory extract_curve(const IntrinsicTriangulation& tri, const CombinatorialCrossing& z);

GeometricCrossing extract_geometric_crossing(const IntrinsicTriangulation& tri,
                                             const CombinatorialCrossing& z);

// One piece of an input edge's path over the triangulation: either it runs
// along a marked edge or it is a traced curve between two vertices sitting on
// the input edge.
struct EdgeSegment {
  bool shared = false;
  int t1_edge = HalfedgeMesh::kInvalid;  // the coincident edge when shared
  CurveTrajectory curve;                 // otherwise
  double u0 = 0.0, u1 = 1.0;             // parameter span along the input edge
};

struct EdgeTrajectory {
  int t0_edge = HalfedgeMesh::kInvalid;
  int start_vertex = HalfedgeMesh::kInvalid;
  int end_vertex = HalfedgeMesh::kInvalid;
  std::vector<int> via_vertices;      // inserted vertices passed through, in order
  std::vector<EdgeSegment> segments;
  std::vector<GeometricCrossing> crossings;  // u rescaled to run 0 to 1 over the whole edge
  int n_clamped = 0;
};

// Follows input edge e0 from its tail using the roundabouts there, continuing
// through any split vertices until the far endpoint is reached.
EdgeTrajectory extract_edge(const IntrinsicTriangulation& tri, int t0_edge);

// Transversal crossing count per input edge, computed combinatorially. The
// total equals the sum of positive normal coordinates.
Eigen::VectorXi transpose_crossing_counts(const IntrinsicTriangulation& tri);

}  // namespace itri
