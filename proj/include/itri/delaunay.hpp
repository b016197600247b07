#pragma once

#include "itri/intrinsic_triangulation.hpp"

namespace itri {

// Edge e satisfies the Delaunay condition when the cotangents of the two
// angles facing it sum to at least -eps. Boundary edges pass by convention.
bool is_delaunay_edge(const IntrinsicTriangulation& tri, int e, double eps = 1e-5);

// Greedily flips edges failing the Delaunay test until none remain. Returns
// the flip count. Expects a metric with strict triangle inequalities, so run
// mollify first on degenerate input.
int flip_to_delaunay(IntrinsicTriangulation& tri, double eps = 1e-5);

struct RefinementConfig {
  double min_angle = 25.0;           // degrees
  double delaunay_tolerance = 1e-5;  // cot sum slack
  double mollify_eps_rel = 1e-5;
  // cap on inserted vertices, interior and boundary together
  int max_insertions = 100000;
  // vertices whose angle sum falls under this are treated as cone tips whose
  // incident skinny faces cannot be improved
  double narrow_threshold = 60.0;  // degrees
};

struct RefinementReport {
  int insertions = 0;       // interior circumcenter vertices
  int boundary_splits = 0;  // boundary edge midpoints
  int removals = 0;         // interior vertices taken back out near the boundary
  int removal_failures = 0;
  int flips = 0;  // all flips, the initial Delaunay pass included
  int exempt_faces = 0;
  double min_angle_deg = 180.0;  // over non-exempt corners, 180 when none exist
  double mollify_delta = 0.0;
  bool reached_bound = false;  // no violating non-exempt face remained
  double seconds = 0.0;
};

// Chew style refinement: repeatedly split the worst face below the angle
// bound at its circumcenter, reached by walking straight from the face
// barycenter. Walks escaping through the boundary split that boundary edge at
// its midpoint instead and clear inserted interior vertices within the old
// edge length of the midpoint. Faces whose skinny corner comes from a single
// narrow vertex, directly or through the input face containing them, are
// skipped and excluded from the reported minimum.
RefinementReport delaunay_refine(IntrinsicTriangulation& tri, const RefinementConfig& config = {});

}  // namespace itri
