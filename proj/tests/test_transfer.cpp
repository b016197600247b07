#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "itri/common_subdivision.hpp"
#include "itri/delaunay.hpp"
#include "itri/intrinsic_triangulation.hpp"
#include "itri/transfer.hpp"
#include "support/planar_oracle.hpp"

using namespace itri;

namespace {

Eigen::Vector2d input_point_2d(const IntrinsicTriangulation& tri, const SurfacePoint& sp,
                               const std::vector<Eigen::Vector2d>& pts) {
  if (sp.kind == SimplexKind::Vertex) return pts[sp.id];
  if (sp.kind == SimplexKind::Edge) {
    const int h = tri.input().halfedge_of_edge(sp.id);
    return (1.0 - sp.edge_t()) * pts[tri.input().tail(h)] + sp.edge_t() * pts[tri.input().head(h)];
  }
  const auto vs = tri.input().face_vertices(sp.id);
  return sp.bary[0] * pts[vs[0]] + sp.bary[1] * pts[vs[1]] + sp.bary[2] * pts[vs[2]];
}

// unit square fanned around an off center vertex; refining it to the default
// bound always inserts, giving the two function spaces different dimensions
struct RefinedFlat {
  IntrinsicTriangulation tri;
  std::vector<Eigen::Vector2d> pts;
};

RefinedFlat refined_fan() {
  const std::vector<Eigen::Vector2d> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.98, 0.03}};
  const std::vector<std::array<int, 3>> faces = {{4, 0, 1}, {4, 1, 2}, {4, 2, 3}, {4, 3, 0}};
  auto m = HalfedgeMesh::from_faces(5, faces);
  Eigen::VectorXd len(m.edge_capacity());
  for (int e = 0; e < m.edge_capacity(); ++e) {
    const int h = m.halfedge_of_edge(e);
    len[e] = (pts[m.head(h)] - pts[m.tail(h)]).norm();
  }
  auto tri = IntrinsicTriangulation::from_input(m, len);
  RefinementConfig cfg;
  cfg.max_insertions = 2000;
  const auto rep = delaunay_refine(tri, cfg);
  REQUIRE(rep.reached_bound);
  REQUIRE(rep.insertions + rep.boundary_splits > 0);
  return {std::move(tri), pts};
}

}  // namespace

TEST_CASE("identity triangulation transfers exactly") {
  auto grid = testsupport::flat_grid(4, 3);
  auto tri = IntrinsicTriangulation::from_input(grid.mesh, grid.lengths);
  const auto S = build_common_subdivision(tri);

  std::mt19937 rng(3u);
  std::uniform_real_distribution<double> un(-2.0, 2.0);
  Eigen::VectorXd f(12);
  for (int i = 0; i < 12; ++i) f[i] = un(rng);

  const Eigen::VectorXd fwd = transfer_l2(tri, S, f, TransferDirection::IntrinsicToInput);
  const Eigen::VectorXd bwd = transfer_l2(tri, S, f, TransferDirection::InputToIntrinsic);
  CHECK((fwd - f).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((bwd - f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constants survive every path") {
  auto rf = refined_fan();
  const auto S = build_common_subdivision(rf.tri);
  const int n0 = 5;
  const int n1 = static_cast<int>(S.column_to_vertex.size());
  REQUIRE(n1 > n0);

  const Eigen::VectorXd ones1 = Eigen::VectorXd::Ones(n1);
  const Eigen::VectorXd to0 = transfer_l2(rf.tri, S, ones1, TransferDirection::IntrinsicToInput);
  CHECK((to0 - Eigen::VectorXd::Ones(n0)).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::VectorXd ones0 = Eigen::VectorXd::Ones(n0);
  const Eigen::VectorXd to1 = transfer_l2(rf.tri, S, ones0, TransferDirection::InputToIntrinsic);
  CHECK((to1 - ones1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("flat refinement reproduces linear functions") {
  auto rf = refined_fan();
  const auto S = build_common_subdivision(rf.tri);
  auto lin = [](const Eigen::Vector2d& p) { return 0.3 + 0.7 * p.x() - 0.4 * p.y(); };

  const int n1 = static_cast<int>(S.column_to_vertex.size());
  Eigen::VectorXd f1(n1);
  for (int c = 0; c < n1; ++c) {
    const int v = S.column_to_vertex[c];
    f1[c] = lin(input_point_2d(rf.tri, rf.tri.vertex_positions[v], rf.pts));
  }
  const Eigen::VectorXd g0 = transfer_l2(rf.tri, S, f1, TransferDirection::IntrinsicToInput);
  for (int v = 0; v < 5; ++v) CHECK(g0[v] == doctest::Approx(lin(rf.pts[v])).epsilon(1e-9));

  Eigen::VectorXd f0(5);
  for (int v = 0; v < 5; ++v) f0[v] = lin(rf.pts[v]);
  const Eigen::VectorXd g1 = transfer_l2(rf.tri, S, f0, TransferDirection::InputToIntrinsic);
  for (int c = 0; c < n1; ++c) {
    const int v = S.column_to_vertex[c];
    const double want = lin(input_point_2d(rf.tri, rf.tri.vertex_positions[v], rf.pts));
    CHECK(g1[c] == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("projection beats copying vertex values") {
  auto rf = refined_fan();
  const auto S = build_common_subdivision(rf.tri);
  const TransferOperator op(rf.tri, S, TransferDirection::IntrinsicToInput);
  const int n1 = static_cast<int>(S.column_to_vertex.size());

  double sum_proj = 0.0, sum_naive = 0.0;
  for (unsigned seed : {3u, 5u, 9u, 13u}) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    Eigen::VectorXd f(n1);
    for (int i = 0; i < n1; ++i) f[i] = un(rng);

    const Eigen::VectorXd g = op.apply(f);
    Eigen::VectorXd naive(5);
    for (int v = 0; v < 5; ++v) naive[v] = f[S.vertex_to_column[v]];

    const double rp = op.residual(f, g);
    const double rn = op.residual(f, naive);
    CHECK(rp <= rn + 1e-12);
    sum_proj += rp;
    sum_naive += rn;
  }
  CHECK(sum_proj < sum_naive);
}

TEST_CASE("prefactored operator matches the one shot call") {
  auto rf = refined_fan();
  const auto S = build_common_subdivision(rf.tri);
  const TransferOperator op(rf.tri, S, TransferDirection::InputToIntrinsic);

  std::mt19937 rng(17u);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  for (int round = 0; round < 2; ++round) {
    Eigen::VectorXd f(5);
    for (int i = 0; i < 5; ++i) f[i] = un(rng);
    const Eigen::VectorXd a = op.apply(f);
    const Eigen::VectorXd b = transfer_l2(rf.tri, S, f, TransferDirection::InputToIntrinsic);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("iterative fallback agrees with the direct solve") {
  auto rf = refined_fan();
  const auto S = build_common_subdivision(rf.tri);

  std::mt19937 rng(8u);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  const int n1 = static_cast<int>(S.column_to_vertex.size());
  Eigen::VectorXd f(n1);
  for (int i = 0; i < n1; ++i) f[i] = un(rng);

  TransferOptions small;
  small.direct_size_limit = 1;
  const Eigen::VectorXd direct = transfer_l2(rf.tri, S, f, TransferDirection::IntrinsicToInput);
  const Eigen::VectorXd iter =
      transfer_l2(rf.tri, S, f, TransferDirection::IntrinsicToInput, small);
  CHECK((direct - iter).cwiseAbs().maxCoeff() < 1e-8);
}
