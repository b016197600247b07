#pragma once

#include <Eigen/Core>
#include <string>

namespace itri {

enum class SimplexKind { Vertex, Edge, Face };
enum class Layer { Input, Intrinsic };

// A point on a triangulation, addressed by the smallest simplex containing it.
// Barycentric coordinates are padded to 3 entries: vertices use (1,0,0), edge
// points (1-t, t, 0) with t measured along the edge's canonical halfedge.
struct SurfacePoint {
  SimplexKind kind = SimplexKind::Vertex;
  Layer layer = Layer::Input;
  int id = -1;
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();

  static SurfacePoint vertex(Layer layer, int v) {
    return {SimplexKind::Vertex, layer, v, {1.0, 0.0, 0.0}};
  }
  static SurfacePoint edge(Layer layer, int e, double t) {
    return {SimplexKind::Edge, layer, e, {1.0 - t, t, 0.0}};
  }
  static SurfacePoint face(Layer layer, int f, const Eigen::Vector3d& u) {
    return {SimplexKind::Face, layer, f, u};
  }

  // position along the canonical halfedge for edge points
  double edge_t() const { return bary[1]; }

  bool operator==(const SurfacePoint& o) const {
    return kind == o.kind && layer == o.layer && id == o.id && bary == o.bary;
  }
};

std::string to_string(const SurfacePoint& p);

// Direction at a surface point. For face points `dir` is a barycentric
// displacement (entries sum to 0); for edge points `dir.head<2>()` lives in
// the frame where the canonical halfedge runs along +x and its face side is
// +y; for vertex points it lives in the frame where the vertex's reference
// halfedge runs along +x.
struct TangentVector {
  SurfacePoint base;
  Eigen::Vector3d dir = Eigen::Vector3d::Zero();
  double magnitude = 0.0;
};

}  // namespace itri
