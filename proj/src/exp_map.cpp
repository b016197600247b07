#include "itri/exp_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "itri/geometry.hpp"

namespace itri {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// crossings this close to an endpoint (in edge parameter space) are nudged
// off the vertex and flagged
constexpr double kVertexTol = 1e-12;

}  // namespace

ExpResult exponential_walk(const IntrinsicTriangulation& tri, int start_face,
                           const Eigen::Vector3d& start, const Eigen::Vector2d& dir,
                           double distance) {
  const auto& m = tri.mesh;
  if (!m.face_alive(start_face)) throw MeshError("walk started on a dead face");
  if (!(dir.norm() > 0.0)) throw MeshError("walk needs a direction");
  if (!(distance >= 0.0) || !std::isfinite(distance))
    throw MeshError("walk needs a finite nonnegative distance");

  ExpResult res;
  // current face unfolded into a fixed plane; P.col(s) is tail(hs[s])
  std::array<int, 3> hs = m.face_halfedges(start_face);
  Eigen::Matrix<double, 2, 3> P =
      layout_triangle(tri.lengths[m.edge(hs[0])], tri.lengths[m.edge(hs[1])],
                      tri.lengths[m.edge(hs[2])]);
  Eigen::Vector2d X = P * start;
  const Eigen::Vector2d d = dir.normalized();
  double rem = distance;
  int f = start_face;

  const int step_cap = 10 * m.n_faces() + 64;
  while (true) {
    ++res.steps;
    const bool over_budget = res.steps > step_cap;

    // the side the ray leaves through; the face is convex, so the nearest
    // outward-facing side wins
    int exit_slot = -1;
    double s_exit = 0.0, w_exit = 0.0;
    if (!over_budget) {
      for (int s = 0; s < 3; ++s) {
        const Eigen::Vector2d A = P.col(s), B = P.col((s + 1) % 3);
        if (cross2(B - A, d) >= 0.0) continue;  // not leaving through this side
        const double denom = cross2(d, B - A);
        const double sc = cross2(A - X, B - A) / denom;
        if (sc < 0.0) continue;
        if (exit_slot < 0 || sc < s_exit) {
          exit_slot = s;
          s_exit = sc;
          w_exit = cross2(A - X, d) / denom;
        }
      }
    }

    if (over_budget || exit_slot < 0 || rem <= s_exit) {
      if (over_budget || exit_slot < 0) res.truncated = true;
      if (!res.truncated) X += rem * d;
      Eigen::Vector3d bl = barycentric_in_layout(P, X).cwiseMax(0.0);
      const double sum = bl.sum();
      if (sum > 0.0) bl /= sum;
      // hs is rotated relative to the face's canonical corner order
      const int s0 = m.face_slot(hs[0]);
      Eigen::Vector3d b;
      for (int i = 0; i < 3; ++i) b[(s0 + i) % 3] = bl[i];
      res.point = SurfacePoint::face(Layer::Intrinsic, f, b);
      res.face = f;
      return res;
    }

    double w = w_exit;
    if (w < kVertexTol || w > 1.0 - kVertexTol) {
      w = std::clamp(w, kVertexTol, 1.0 - kVertexTol);
      res.deflected = true;
    }
    const Eigen::Vector2d A = P.col(exit_slot), B = P.col((exit_slot + 1) % 3);
    X = A + w * (B - A);  // snap onto the crossed edge
    rem -= s_exit;

    const int hx = hs[exit_slot];
    const int g = m.twin(hx);
    if (!m.interior(g)) {
      res.hit_boundary = true;
      const int e = m.edge(hx);
      const double t = m.halfedge_of_edge(e) == hx ? w : 1.0 - w;
      res.point = SurfacePoint::edge(Layer::Intrinsic, e, t);
      res.face = f;
      return res;
    }

    // unfold the neighbor across the shared edge; tail(g) sits where head(hx) was
    const Eigen::Vector2d apex =
        place_apex(B, A, tri.lengths[m.edge(m.prev(g))], tri.lengths[m.edge(m.next(g))], true);
    f = m.face(g);
    hs = {g, m.next(g), m.prev(g)};
    P.col(0) = B;
    P.col(1) = A;
    P.col(2) = apex;
  }
}

}  // namespace itri
