#include "itri/intrinsic_triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace itri {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

IntrinsicTriangulation IntrinsicTriangulation::from_input(const HalfedgeMesh& input_mesh,
                                                          const Eigen::VectorXd& input_lengths) {
  if (auto v = input_mesh.validate(); !v.ok)
    throw MeshError("input mesh invalid: " + v.message);
  if (input_lengths.size() != input_mesh.edge_capacity())
    throw MeshError("length array does not match the input edge count");
  for (int e = 0; e < input_mesh.edge_capacity(); ++e)
    if (!(input_lengths[e] > 0.0) || !std::isfinite(input_lengths[e]))
      throw MeshError("nonpositive input edge length", "edge", e);

  IntrinsicTriangulation tri;
  tri.input_ = input_mesh;
  tri.input_lengths_ = input_lengths;
  tri.input_vertex_count_ = static_cast<size_t>(input_mesh.n_vertices());
  tri.input_outgoing_.resize(input_mesh.vertex_capacity());
  tri.input_rotation_.assign(input_mesh.halfedge_capacity(), HalfedgeMesh::kInvalid);
  for (int v = 0; v < input_mesh.vertex_capacity(); ++v) {
    tri.input_outgoing_[v] = input_mesh.outgoing_halfedges_ccw(v);
    for (size_t idx = 0; idx < tri.input_outgoing_[v].size(); ++idx)
      tri.input_rotation_[tri.input_outgoing_[v][idx]] = static_cast<int>(idx);
  }

  tri.mesh = input_mesh;
  tri.lengths = input_lengths;
  tri.normal = Eigen::VectorXi::Constant(input_mesh.edge_capacity(), -1);
  tri.roundabout = Eigen::VectorXi::Zero(input_mesh.halfedge_capacity());
  for (int h = 0; h < input_mesh.halfedge_capacity(); ++h)
    tri.roundabout[h] = tri.input_rotation_[h];
  tri.vertex_positions.reserve(input_mesh.vertex_capacity());
  for (int v = 0; v < input_mesh.vertex_capacity(); ++v)
    tri.vertex_positions.push_back(SurfacePoint::vertex(Layer::Input, v));
  return tri;
}

int IntrinsicTriangulation::n_inserted_vertices() const {
  return mesh.n_vertices() - input_.n_vertices();
}

double IntrinsicTriangulation::corner_angle_at(int h) const {
  return corner_angle(lengths[mesh.edge(mesh.next(h))], lengths[mesh.edge(h)],
                      lengths[mesh.edge(mesh.prev(h))]);
}

double IntrinsicTriangulation::vertex_angle_sum(int v) const {
  double sum = 0.0;
  for (int h : mesh.outgoing_halfedges_ccw(v))
    if (mesh.interior(h)) sum += corner_angle_at(h);
  return sum;
}

double IntrinsicTriangulation::total_area() const {
  double area = 0.0;
  for (int f = 0; f < mesh.face_capacity(); ++f) {
    if (!mesh.face_alive(f)) continue;
    const Eigen::Vector3d l = face_lengths(f);
    area += triangle_area(l[0], l[1], l[2]);
  }
  return area;
}

bool IntrinsicTriangulation::is_flippable(int e, double tol, bool relaxed) const {
  if (!mesh.edge_alive(e) || mesh.is_boundary_edge(e)) return false;
  const int h = mesh.halfedge_of_edge(e), t = mesh.twin(h);
  if (mesh.degree(mesh.tail(h)) < 2 || mesh.degree(mesh.tail(t)) < 2) return false;
  // quad corners: two single angles at the far corners, two sums at i and j
  const double at_i = corner_angle_at(h) + corner_angle_at(mesh.next(t));
  const double at_j = corner_angle_at(t) + corner_angle_at(mesh.next(h));
  const double at_k = corner_angle_at(mesh.prev(h));
  const double at_l = corner_angle_at(mesh.prev(t));
  const double cap = relaxed ? kPi * (1.0 + tol) : kPi * (1.0 - tol);
  return at_i < cap && at_j < cap && at_k < cap && at_l < cap;
}

int IntrinsicTriangulation::roundabout_from_cw(int h) const {
  const int v = mesh.tail(h);
  const int g = mesh.next_outgoing_cw(h);  // face(g) spans the sector from g to h
  if (!mesh.interior(g))
    throw MeshError("roundabout rule crossed the boundary sector", "halfedge", h);
  const int s = mesh.face_slot(g);
  const auto cc = face_corner_counts(mesh.face(g));
  const int advance = n_minus(normal[mesh.edge(g)]) + cc.e[(s + 1) % 3];
  const int d0 = input_degree(v);
  return (roundabout[g] + advance) % d0;
}

bool IntrinsicTriangulation::flip_edge(int e, double tol, bool relaxed) {
  if (!is_flippable(e, tol, relaxed)) return false;
  const int h = mesh.halfedge_of_edge(e), t = mesh.twin(h);
  const int hn = mesh.next(h), hp = mesh.prev(h);
  const int tn = mesh.next(t), tp = mesh.prev(t);

  // sides of the quad, before anything moves
  const double l_ij = lengths[e];
  const double l_jk = lengths[mesh.edge(hn)], l_ki = lengths[mesh.edge(hp)];
  const double l_il = lengths[mesh.edge(tn)], l_lj = lengths[mesh.edge(tp)];
  const Eigen::Vector2d P_i{0.0, 0.0}, P_j{l_ij, 0.0};
  const Eigen::Vector2d P_k = place_apex(P_i, P_j, l_ki, l_jk, true);
  const Eigen::Vector2d P_l = place_apex(P_i, P_j, l_il, l_lj, false);
  const double new_len = (P_k - P_l).norm();

  // curve bookkeeping on both sides, indexed from corner i along ij
  const int sA = mesh.face_slot(h), sB = mesh.face_slot(t);
  const auto ccA = face_corner_counts(mesh.face(h));
  const auto ccB = face_corner_counts(mesh.face(t));
  const int c_iA = ccA.c[(sA + 1) % 3], c_jA = ccA.c[(sA + 2) % 3], c_kA = ccA.c[sA];
  const int e_iA = ccA.e[(sA + 1) % 3], e_jA = ccA.e[(sA + 2) % 3], e_kA = ccA.e[sA];
  const int c_jB = ccB.c[(sB + 1) % 3], c_iB = ccB.c[(sB + 2) % 3], c_lB = ccB.c[sB];
  const int e_jB = ccB.e[(sB + 1) % 3], e_iB = ccB.e[(sB + 2) % 3], e_lB = ccB.e[sB];
  const int np = n_plus(normal[e]);

  // both quad sides at an inserted vertex shared means the quad covers one
  // whole side of the chain there, so the chain crosses the quad straight and
  // the flipped edge lands on it
  const bool through_i = !is_input_vertex(mesh.tail(h)) &&
                         normal[mesh.edge(hp)] == -1 && normal[mesh.edge(tn)] == -1;
  const bool through_j = !is_input_vertex(mesh.head(h)) &&
                         normal[mesh.edge(hn)] == -1 && normal[mesh.edge(tp)] == -1;

  // the flipped edge then continues the chain, so it inherits the chain
  // direction at each far corner; the cw rule would misread the zero angle
  // sliver left at the through vertex
  int r_k = -1, r_l = -1;
  if (through_i) {
    r_k = roundabout[hp];
    r_l = roundabout[mesh.twin(tn)];
  } else if (through_j) {
    r_k = roundabout[mesh.twin(hn)];
    r_l = roundabout[tp];
  }

  int n_new;
  const int overlap_lo = std::max(c_iA, c_iB);
  const int overlap_hi = std::min(c_iA + e_kA, c_iB + e_lB);
  if (through_i || through_j) {
    n_new = -1;
  } else if (overlap_hi > overlap_lo) {
    // a curve runs straight from corner k to corner l; the flipped edge
    // lands on it and becomes shared
    n_new = -1;
  } else {
    n_new = c_kA + c_lB + e_iA + e_iB + e_jA + e_jB + std::max(0, c_iA + c_jB - np) +
            std::max(0, c_jA + c_iB - np) + n_minus(normal[e]);
  }

  mesh.flip_edge_raw(h);
  lengths[e] = new_len;
  normal[e] = n_new;
  // after the raw flip h runs l to k
  if (is_input_vertex(mesh.tail(h))) {
    if (through_i || through_j) roundabout[h] = r_l;
    else assign_roundabout(h);
  }
  if (is_input_vertex(mesh.tail(t))) {
    if (through_i || through_j) roundabout[t] = r_k;
    else assign_roundabout(t);
  }
  maybe_validate();
  return true;
}

std::vector<int> IntrinsicTriangulation::vertex_input_degrees() const {
  std::vector<int> deg(mesh.vertex_capacity(), -1);
  for (int v = 0; v < mesh.vertex_capacity(); ++v)
    if (mesh.vertex_alive(v) && is_input_vertex(v)) deg[v] = input_degree(v);
  return deg;
}

MeshValidation IntrinsicTriangulation::validate() const {
  auto fail = [](std::string msg) { return MeshValidation{false, std::move(msg)}; };
  if (auto v = mesh.validate(); !v.ok) return v;
  for (int e = 0; e < mesh.edge_capacity(); ++e) {
    if (!mesh.edge_alive(e)) continue;
    if (!(lengths[e] > 0.0) || !std::isfinite(lengths[e]))
      return fail("bad length on edge " + std::to_string(e));
  }
  if (worst_triangle_slack(mesh, lengths) >= 0.0)
    return fail("a face violates the triangle inequality");

  if (static_cast<int>(vertex_positions.size()) < mesh.vertex_capacity())
    return fail("vertex position array too short");
  for (int v = 0; v < mesh.vertex_capacity(); ++v) {
    if (!mesh.vertex_alive(v)) continue;
    const SurfacePoint& p = vertex_positions[v];
    if (p.layer != Layer::Input) return fail("vertex position off the input layer");
    if (is_input_vertex(v)) {
      if (p.kind != SimplexKind::Vertex || p.id != v)
        return fail("input vertex " + std::to_string(v) + " lost its identity position");
      continue;
    }
    const bool alive = p.kind == SimplexKind::Vertex  ? input_.vertex_alive(p.id)
                       : p.kind == SimplexKind::Edge  ? input_.edge_alive(p.id)
                                                      : input_.face_alive(p.id);
    if (!alive) return fail("inserted vertex " + std::to_string(v) + " sits on a dead simplex");
    if (std::abs(p.bary.sum() - 1.0) > 1e-9 || p.bary.minCoeff() < -1e-12)
      return fail("inserted vertex " + std::to_string(v) + " has bad barycentrics");
  }
  return validate_integer_coords(mesh, normal, roundabout, vertex_input_degrees());
}

void IntrinsicTriangulation::grow_arrays() {
  if (lengths.size() < mesh.edge_capacity()) {
    const auto old = lengths.size();
    lengths.conservativeResize(mesh.edge_capacity());
    lengths.segment(old, lengths.size() - old).setZero();
  }
  if (normal.size() < mesh.edge_capacity()) {
    const auto old = normal.size();
    normal.conservativeResize(mesh.edge_capacity());
    normal.segment(old, normal.size() - old).setZero();
  }
  if (roundabout.size() < mesh.halfedge_capacity()) {
    const auto old = roundabout.size();
    roundabout.conservativeResize(mesh.halfedge_capacity());
    roundabout.segment(old, roundabout.size() - old).setZero();
  }
  if (static_cast<int>(vertex_positions.size()) < mesh.vertex_capacity())
    vertex_positions.resize(mesh.vertex_capacity());
}

void IntrinsicTriangulation::maybe_validate() const {
  if (!debug_validate) return;
  if (auto v = validate(); !v.ok) throw MeshError("integrity check failed: " + v.message);
}

std::vector<int> input_faces_containing(const IntrinsicTriangulation& tri, const SurfacePoint& p) {
  std::vector<int> out;
  const HalfedgeMesh& in = tri.input();
  switch (p.kind) {
    case SimplexKind::Vertex:
      for (int h : tri.input_outgoing(p.id))
        if (in.interior(h)) out.push_back(in.face(h));
      break;
    case SimplexKind::Edge: {
      const int h = in.halfedge_of_edge(p.id);
      if (in.interior(h)) out.push_back(in.face(h));
      if (in.interior(in.twin(h))) out.push_back(in.face(in.twin(h)));
      break;
    }
    case SimplexKind::Face:
      out.push_back(p.id);
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace itri
