#include "itri/halfedge_mesh.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

using itri::HalfedgeMesh;
using itri::MeshError;

namespace {

HalfedgeMesh tetrahedron() {
  return HalfedgeMesh::from_faces(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
}

HalfedgeMesh square() {
  return HalfedgeMesh::from_faces(4, {{0, 1, 2}, {0, 2, 3}});
}

void check_valid(const HalfedgeMesh& m) {
  auto v = m.validate();
  INFO(v.message);
  CHECK(v.ok);
}

}  // namespace

TEST_CASE("tetrahedron connectivity") {
  auto m = tetrahedron();
  check_valid(m);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_edges() == 6);
  CHECK(m.n_faces() == 4);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.n_boundary_loops() == 0);
  CHECK(m.n_interior_halfedges() == 12);
  for (int v = 0; v < 4; ++v) {
    CHECK(m.degree(v) == 3);
    CHECK_FALSE(m.is_boundary_vertex(v));
    auto out = m.outgoing_halfedges_ccw(v);
    CHECK(out.size() == 3);
    for (int h : out) CHECK(m.tail(h) == v);
  }
  for (int h = 0; h < m.halfedge_capacity(); ++h) {
    CHECK(m.twin(m.twin(h)) == h);
    CHECK(m.head(h) == m.tail(m.next(h)));
    CHECK(m.prev(m.next(h)) == h);
  }
}

TEST_CASE("square with boundary") {
  auto m = square();
  check_valid(m);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_edges() == 5);
  CHECK(m.n_faces() == 2);
  CHECK(m.euler_characteristic() == 1);
  CHECK(m.n_boundary_loops() == 1);
  CHECK(m.n_interior_halfedges() == 6);
  CHECK(m.halfedge_capacity() == 10);
  for (int v = 0; v < 4; ++v) CHECK(m.is_boundary_vertex(v));
  CHECK(m.degree(0) == 3);
  CHECK(m.degree(1) == 2);
  CHECK(m.degree(2) == 3);
  CHECK(m.degree(3) == 2);
  int n_boundary_edges = 0;
  for (int e = 0; e < m.edge_capacity(); ++e) n_boundary_edges += m.is_boundary_edge(e);
  CHECK(n_boundary_edges == 4);
  // ccw orbit at a boundary vertex still visits every outgoing halfedge once
  auto out = m.outgoing_halfedges_ccw(0);
  CHECK(out.size() == 3);
  std::set<int> uniq(out.begin(), out.end());
  CHECK(uniq.size() == 3);
}

TEST_CASE("self-glued cone") {
  // one triangle with two sides glued: a cone over a loop
  auto m = HalfedgeMesh::from_faces(2, {{0, 1, 1}});
  check_valid(m);
  CHECK(m.n_vertices() == 2);
  CHECK(m.n_edges() == 2);
  CHECK(m.n_faces() == 1);
  CHECK(m.euler_characteristic() == 1);
  CHECK(m.n_boundary_loops() == 1);
  CHECK(m.degree(0) == 1);
  CHECK(m.degree(1) == 3);  // loop edge contributes two outgoing halfedges, (0,1) one
  CHECK(m.is_boundary_vertex(1));
  CHECK_FALSE(m.is_boundary_vertex(0));
}

TEST_CASE("pillow") {
  // two triangles glued along all three sides pairwise: a sphere Δ-complex
  auto m = HalfedgeMesh::from_faces(3, {{0, 1, 2}, {0, 2, 1}});
  check_valid(m);
  CHECK(m.n_vertices() == 3);
  CHECK(m.n_edges() == 3);
  CHECK(m.n_faces() == 2);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.n_boundary_loops() == 0);
  for (int v = 0; v < 3; ++v) CHECK(m.degree(v) == 2);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(HalfedgeMesh::from_faces(3, {{0, 1, 2}, {0, 1, 2}}), MeshError);    // orientation
  CHECK_THROWS_AS(HalfedgeMesh::from_faces(4, {{0, 1, 2}}), MeshError);               // isolated 3
  CHECK_THROWS_AS(HalfedgeMesh::from_faces(3, {{0, 1, 5}}), MeshError);               // out of range
  CHECK_THROWS_AS(
      HalfedgeMesh::from_faces(5, {{0, 1, 2}, {2, 1, 0}, {0, 3, 4}, {4, 3, 0}}),
      MeshError);  // two spheres sharing vertex 0
  CHECK_THROWS_AS(
      HalfedgeMesh::from_faces(6, {{0, 1, 2}, {3, 4, 5}, {1, 0, 2}, {4, 3, 5}, {0, 2, 1},
                                   {3, 5, 4}}),
      MeshError);  // three faces on an edge
}

TEST_CASE("flip rewires the diagonal") {
  auto m = square();
  // diagonal is the unique interior edge
  int diag = -1;
  for (int e = 0; e < m.edge_capacity(); ++e)
    if (!m.is_boundary_edge(e)) diag = e;
  REQUIRE(diag >= 0);
  const int h = m.halfedge_of_edge(diag);
  const int l = m.opposite_vertex(m.twin(h));
  const int k = m.opposite_vertex(h);
  m.flip_edge_raw(h);
  check_valid(m);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_edges() == 5);
  CHECK(m.n_faces() == 2);
  CHECK(m.tail(h) == l);
  CHECK(m.head(h) == k);
  CHECK(m.edge(h) == diag);
  CHECK(m.degree(1) == 3);
  CHECK(m.degree(3) == 3);
  CHECK(m.degree(0) == 2);
  CHECK(m.degree(2) == 2);
  // flipping back and forth stays valid
  for (int it = 0; it < 4; ++it) m.flip_edge_raw(m.halfedge_of_edge(diag));
  check_valid(m);
  CHECK(m.degree(0) == 2);
}

TEST_CASE("face split adds a degree-3 vertex") {
  auto m = tetrahedron();
  const int f = 0;
  const int h0 = m.halfedge_of_face(f);
  const int i = m.tail(h0), j = m.head(h0), k = m.opposite_vertex(h0);
  auto s = m.split_face_raw(h0);
  check_valid(m);
  CHECK(m.n_vertices() == 5);
  CHECK(m.n_edges() == 9);
  CHECK(m.n_faces() == 6);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.degree(s.new_vertex) == 3);
  CHECK(m.tail(s.he_pi) == s.new_vertex);
  CHECK(m.head(s.he_pi) == i);
  CHECK(m.head(s.he_pj) == j);
  CHECK(m.head(s.he_pk) == k);
  CHECK(m.face(h0) == f);
}

TEST_CASE("interior edge split") {
  auto m = tetrahedron();
  const int h0 = 0;
  const int i = m.tail(h0), j = m.head(h0);
  const int k = m.opposite_vertex(h0), l = m.opposite_vertex(m.twin(h0));
  const int e_old = m.edge(h0);
  auto s = m.split_edge_raw(h0);
  check_valid(m);
  CHECK(m.n_vertices() == 5);
  CHECK(m.n_edges() == 9);
  CHECK(m.n_faces() == 6);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.degree(s.new_vertex) == 4);
  CHECK(s.he_ip == h0);
  CHECK(m.tail(h0) == i);
  CHECK(m.head(h0) == s.new_vertex);
  CHECK(m.edge(h0) == e_old);
  CHECK(m.head(s.he_pj) == j);
  CHECK(m.head(s.he_pk) == k);
  CHECK(m.head(s.he_pl) == l);
  CHECK(m.tail(s.he_pj) == s.new_vertex);
}

TEST_CASE("boundary edge split") {
  auto m = square();
  // find boundary halfedge 0->1, interior side
  int h01 = -1;
  for (int h = 0; h < m.halfedge_capacity(); ++h)
    if (m.interior(h) && m.tail(h) == 0 && m.head(h) == 1 && !m.interior(m.twin(h))) h01 = h;
  REQUIRE(h01 >= 0);
  auto s = m.split_edge_raw(h01);
  check_valid(m);
  CHECK(m.n_vertices() == 5);
  CHECK(m.n_edges() == 7);
  CHECK(m.n_faces() == 3);
  CHECK(m.euler_characteristic() == 1);
  CHECK(m.n_boundary_loops() == 1);
  CHECK(s.he_pl == HalfedgeMesh::kInvalid);
  CHECK(m.degree(s.new_vertex) == 3);
  CHECK(m.is_boundary_vertex(s.new_vertex));
}

TEST_CASE("split then remove restores counts") {
  auto m = tetrahedron();
  auto s = m.split_face_raw(m.halfedge_of_face(0));
  auto r = m.remove_degree3_interior_raw(s.new_vertex);
  check_valid(m);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_edges() == 6);
  CHECK(m.n_faces() == 4);
  CHECK(m.face_alive(r.kept_face));
  for (int e : r.dead_edges) CHECK_FALSE(m.edge_alive(e));
  CHECK_FALSE(m.vertex_alive(s.new_vertex));
  auto maps = m.compact();
  check_valid(m);
  CHECK(m.n_vertices() == 4);
  CHECK(m.vertex_capacity() == 4);
  CHECK(m.halfedge_capacity() == 12);
  CHECK(maps.vertex[s.new_vertex] == HalfedgeMesh::kInvalid);
}

TEST_CASE("boundary degree-2 removal") {
  auto m = square();
  int h01 = -1;
  for (int h = 0; h < m.halfedge_capacity(); ++h)
    if (m.interior(h) && m.tail(h) == 0 && m.head(h) == 1 && !m.interior(m.twin(h))) h01 = h;
  auto s = m.split_edge_raw(h01);
  REQUIRE(m.degree(s.new_vertex) == 3);
  // make p degree 2 by flipping away the spoke p->k, then remove it
  const int spoke = m.edge(s.he_pk);
  m.flip_edge_raw(m.halfedge_of_edge(spoke));
  REQUIRE(m.degree(s.new_vertex) == 2);
  auto r = m.remove_degree2_boundary_raw(s.new_vertex);
  check_valid(m);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_edges() == 5);
  CHECK(m.n_faces() == 2);
  CHECK(m.n_boundary_loops() == 1);
  CHECK(m.is_boundary_edge(r.new_boundary_edge));
}

TEST_CASE("torus grid") {
  // 3x3 vertex torus triangulated as a grid with wraparound
  const int n = 3;
  std::vector<std::array<int, 3>> faces;
  auto vid = [&](int r, int c) { return ((r + n) % n) * n + (c + n) % n; };
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      faces.push_back({vid(r, c), vid(r, c + 1), vid(r + 1, c + 1)});
      faces.push_back({vid(r, c), vid(r + 1, c + 1), vid(r + 1, c)});
    }
  auto m = HalfedgeMesh::from_faces(n * n, faces);
  check_valid(m);
  CHECK(m.n_vertices() == 9);
  CHECK(m.n_faces() == 18);
  CHECK(m.n_edges() == 27);
  CHECK(m.euler_characteristic() == 0);
  CHECK(m.n_boundary_loops() == 0);
  for (int v = 0; v < 9; ++v) CHECK(m.degree(v) == 6);
}
