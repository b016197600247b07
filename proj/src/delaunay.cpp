#include "itri/delaunay.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

#include "itri/exp_map.hpp"

namespace itri {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool is_delaunay_edge(const IntrinsicTriangulation& tri, int e, double eps) {
  if (tri.mesh.is_boundary_edge(e)) return true;
  const int h = tri.mesh.halfedge_of_edge(e);
  const int t = tri.mesh.twin(h);
  const double a = tri.lengths[e];
  auto cot_facing = [&](int he) {
    return corner_cotangent(a, tri.lengths[tri.mesh.edge(tri.mesh.next(he))],
                            tri.lengths[tri.mesh.edge(tri.mesh.prev(he))]);
  };
  return cot_facing(h) + cot_facing(t) >= -eps;
}

int flip_to_delaunay(IntrinsicTriangulation& tri, double eps) {
  std::deque<int> queue;
  std::vector<char> queued(tri.mesh.edge_capacity(), 0);
  auto push = [&](int e) {
    if (!tri.mesh.edge_alive(e) || tri.mesh.is_boundary_edge(e)) return;
    if (queued[e]) return;
    queued[e] = 1;
    queue.push_back(e);
  };
  for (int e = 0; e < tri.mesh.edge_capacity(); ++e) push(e);

  const long cap = 1000L * std::max(16, tri.mesh.n_edges());
  int flips = 0;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    queued[e] = 0;
    if (!tri.mesh.edge_alive(e) || tri.mesh.is_boundary_edge(e)) continue;
    if (is_delaunay_edge(tri, e, eps)) continue;
    if (!tri.flip_edge(e)) continue;
    if (++flips > cap) throw MeshError("Delaunay flipping exceeded its budget");
    // only the four edges around the flipped one can change state
    const int h = tri.mesh.halfedge_of_edge(e);
    const int t = tri.mesh.twin(h);
    push(tri.mesh.edge(tri.mesh.next(h)));
    push(tri.mesh.edge(tri.mesh.prev(h)));
    push(tri.mesh.edge(tri.mesh.next(t)));
    push(tri.mesh.edge(tri.mesh.prev(t)));
  }
  return flips;
}

namespace {

// cone angles for every live vertex in one sweep over the faces
std::vector<double> vertex_angle_sums(const IntrinsicTriangulation& tri) {
  std::vector<double> sums(tri.mesh.vertex_capacity(), 0.0);
  for (int f = 0; f < tri.mesh.face_capacity(); ++f) {
    if (!tri.mesh.face_alive(f)) continue;
    for (int h : tri.mesh.face_halfedges(f)) sums[tri.mesh.tail(h)] += tri.corner_angle_at(h);
  }
  return sums;
}

// a face is beyond help when its shape is forced by a single cone tip, either
// one of its own corners or a tip of the input face containing it
bool face_exempt(const IntrinsicTriangulation& tri, int f, const std::vector<double>& vsum,
                 double narrow) {
  int tips = 0;
  for (int v : tri.mesh.face_vertices(f))
    if (vsum[v] < narrow) ++tips;
  if (tips == 1) return true;

  // containment in one input face means no input curve crosses any side
  for (int h : tri.mesh.face_halfedges(f))
    if (tri.normal[tri.mesh.edge(h)] > 0) return false;
  const auto hs = tri.mesh.face_halfedges(f);
  std::vector<int> common =
      input_faces_containing(tri, tri.vertex_positions[tri.mesh.tail(hs[0])]);
  for (int s = 1; s < 3 && !common.empty(); ++s) {
    const auto other = input_faces_containing(tri, tri.vertex_positions[tri.mesh.tail(hs[s])]);
    std::vector<int> keep;
    std::set_intersection(common.begin(), common.end(), other.begin(), other.end(),
                          std::back_inserter(keep));
    common.swap(keep);
  }
  for (int f0 : common) {
    int f0_tips = 0;
    for (int v0 : tri.input().face_vertices(f0))
      if (vsum[v0] < narrow) ++f0_tips;
    if (f0_tips == 1) return true;
  }
  return false;
}

// shortest graph distances from src, expanded no further than radius
std::vector<double> dijkstra_within(const IntrinsicTriangulation& tri, int src, double radius) {
  std::vector<double> dist(tri.mesh.vertex_capacity(), std::numeric_limits<double>::infinity());
  std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>>
      pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v] || d > radius) continue;
    for (int h : tri.mesh.outgoing_halfedges_ccw(v)) {
      const int w = tri.mesh.head(h);
      const double nd = d + tri.lengths[tri.mesh.edge(h)];
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return dist;
}

}  // namespace

RefinementReport delaunay_refine(IntrinsicTriangulation& tri, const RefinementConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  RefinementReport rep;
  const double bound = config.min_angle * kPi / 180.0;
  const double narrow = config.narrow_threshold * kPi / 180.0;

  const auto mr = mollify(tri.mesh, tri.lengths, config.mollify_eps_rel);
  rep.mollify_delta = mr.delta;
  rep.flips += flip_to_delaunay(tri, config.delaunay_tolerance);

  while (true) {
    const auto vsum = vertex_angle_sums(tri);
    int worst_face = -1;
    double worst_angle = std::numeric_limits<double>::infinity();
    for (int f = 0; f < tri.mesh.face_capacity(); ++f) {
      if (!tri.mesh.face_alive(f)) continue;
      double a = std::numeric_limits<double>::infinity();
      for (int h : tri.mesh.face_halfedges(f)) a = std::min(a, tri.corner_angle_at(h));
      if (a >= bound) continue;
      if (face_exempt(tri, f, vsum, narrow)) continue;
      if (a < worst_angle) {
        worst_angle = a;
        worst_face = f;
      }
    }
    if (worst_face < 0) {
      rep.reached_bound = true;
      break;
    }
    if (rep.insertions + rep.boundary_splits >= config.max_insertions) break;

    const auto L = tri.face_lengths(worst_face);
    const auto P = layout_triangle(L[0], L[1], L[2]);
    const Eigen::Vector3d center_bary(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    const Eigen::Vector2d target = P * circumcenter_barycentric(L[0], L[1], L[2]);
    const Eigen::Vector2d dir = target - P * center_bary;
    const double span = dir.norm();

    int land_face = worst_face;
    Eigen::Vector3d land = center_bary;
    bool boundary_hit = false;
    int boundary_edge = -1;
    if (span >= 1e-14) {
      const auto walk = exponential_walk(tri, worst_face, center_bary, dir, span);
      if (walk.hit_boundary) {
        boundary_hit = true;
        boundary_edge = walk.point.id;
      } else {
        land_face = walk.face;
        land = walk.point.bary;
      }
    }

    if (!boundary_hit) {
      for (int i = 0; i < 3; ++i) land[i] = std::max(land[i], 1e-9);
      land /= land.sum();
      tri.split_face(land_face, land);
      ++rep.insertions;
      rep.flips += flip_to_delaunay(tri, config.delaunay_tolerance);
      continue;
    }

    // circumcenter fell off the surface: retreat to the boundary edge the
    // walk escaped through, split it in half and thin out the interior
    // vertices the midpoint now covers
    const double radius = tri.lengths[boundary_edge];
    const auto es = tri.split_edge(boundary_edge, 0.5);
    ++rep.boundary_splits;
    rep.flips += flip_to_delaunay(tri, config.delaunay_tolerance);

    const auto dist = dijkstra_within(tri, es.new_vertex, radius);
    std::vector<int> ball;
    for (int v = 0; v < tri.mesh.vertex_capacity(); ++v) {
      if (!tri.mesh.vertex_alive(v) || tri.is_input_vertex(v)) continue;
      if (tri.mesh.is_boundary_vertex(v)) continue;
      if (dist[v] <= radius) ball.push_back(v);
    }
    for (int v : ball) {
      const auto rr = tri.remove_inserted_vertex(v);
      rep.flips += rr.flips;
      if (!rr.removed) {
        ++rep.removal_failures;
        continue;
      }
      ++rep.removals;
      rep.flips += flip_to_delaunay(tri, config.delaunay_tolerance);
    }
  }

  const auto vsum = vertex_angle_sums(tri);
  double min_angle = std::numeric_limits<double>::infinity();
  for (int f = 0; f < tri.mesh.face_capacity(); ++f) {
    if (!tri.mesh.face_alive(f)) continue;
    if (face_exempt(tri, f, vsum, narrow)) {
      ++rep.exempt_faces;
      continue;
    }
    for (int h : tri.mesh.face_halfedges(f)) min_angle = std::min(min_angle, tri.corner_angle_at(h));
  }
  rep.min_angle_deg = std::isfinite(min_angle) ? min_angle * 180.0 / kPi : 180.0;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

}  // namespace itri
