#pragma once

#include <Eigen/Core>

#include "itri/intrinsic_triangulation.hpp"

namespace itri {

struct ExpResult {
  bool hit_boundary = false;  // ran into the surface boundary before the distance was spent
  bool deflected = false;     // a crossing grazed a vertex and was nudged off it
  bool truncated = false;     // step budget ran out; point is where the walk stopped
  SurfacePoint point;         // landing (face point) or boundary hit (edge point), intrinsic layer
  int face = -1;              // face the walk ended in
  int steps = 0;
};

// Walks a geodesic over the current triangulation: starts at barycentric
// `start` inside start_face, heads along `dir` (given in the layout frame of
// that face, first corner at the origin and its outgoing edge along +x) and
// continues straight for `distance`, unfolding faces into a common plane as
// it crosses edges.
ExpResult exponential_walk(const IntrinsicTriangulation& tri, int start_face,
                           const Eigen::Vector3d& start, const Eigen::Vector2d& dir,
                           double distance);

}  // namespace itri
