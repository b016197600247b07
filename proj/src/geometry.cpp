#include "itri/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace itri {

double corner_angle(double a, double b, double c) {
  const double num = std::max(0.0, (a + b - c) * (a - b + c));
  const double den = std::max(0.0, (b + c + a) * (b + c - a));
  return 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
}

double triangle_area(double a, double b, double c) {
  // sort so a >= b >= c, then use the parenthesized Heron variant
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  const double t = std::max(0.0, (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)));
  return 0.25 * std::sqrt(t);
}

CornerAnglesArea corner_angles_and_area(double l_ij, double l_jk, double l_ki) {
  CornerAnglesArea r;
  r.theta[0] = corner_angle(l_jk, l_ij, l_ki);
  r.theta[1] = corner_angle(l_ki, l_ij, l_jk);
  r.theta[2] = corner_angle(l_ij, l_jk, l_ki);
  r.area = triangle_area(l_ij, l_jk, l_ki);
  return r;
}

double corner_cotangent(double a, double b, double c) {
  const double area = triangle_area(a, b, c);
  if (area <= 0.0) {
    // collinear: opposite angle is exactly 0 or pi
    return (b * b + c * c - a * a) >= 0.0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
  }
  return (b * b + c * c - a * a) / (4.0 * area);
}

double displacement_length(const Eigen::Vector3d& l, const Eigen::Vector3d& du) {
  const double q = -l[0] * l[0] * du[0] * du[1] - l[1] * l[1] * du[1] * du[2] -
                   l[2] * l[2] * du[2] * du[0];
  return std::sqrt(std::max(0.0, q));
}

Eigen::Vector3d circumcenter_barycentric(double l_ij, double l_jk, double l_ki) {
  const double a2 = l_jk * l_jk, b2 = l_ki * l_ki, c2 = l_ij * l_ij;
  Eigen::Vector3d v{a2 * (c2 + b2 - a2), b2 * (c2 + a2 - b2), c2 * (a2 + b2 - c2)};
  const double s = v.sum();
  if (s == 0.0) throw std::domain_error("circumcenter of a degenerate triangle");
  return v / s;
}

Eigen::Matrix<double, 2, 3> layout_triangle(double l_ij, double l_jk, double l_ki) {
  Eigen::Matrix<double, 2, 3> P;
  P.col(0) = Eigen::Vector2d{0.0, 0.0};
  P.col(1) = Eigen::Vector2d{l_ij, 0.0};
  P.col(2) = place_apex(P.col(0), P.col(1), l_ki, l_jk, true);
  return P;
}

Eigen::Vector2d place_apex(const Eigen::Vector2d& A, const Eigen::Vector2d& B, double dist_a,
                           double dist_b, bool left) {
  const Eigen::Vector2d d = B - A;
  const double len = d.norm();
  if (len <= 0.0) throw std::domain_error("apex placement over a zero-length base");
  const Eigen::Vector2d t = d / len;
  const Eigen::Vector2d n = left ? Eigen::Vector2d{-t.y(), t.x()} : Eigen::Vector2d{t.y(), -t.x()};
  const double x = (len * len + dist_a * dist_a - dist_b * dist_b) / (2.0 * len);
  const double y2 = dist_a * dist_a - x * x;
  return A + x * t + std::sqrt(std::max(0.0, y2)) * n;
}

Eigen::Vector3d barycentric_in_layout(const Eigen::Matrix<double, 2, 3>& P,
                                      const Eigen::Vector2d& x) {
  auto cross2 = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
    return u.x() * v.y() - u.y() * v.x();
  };
  const double total = cross2(P.col(1) - P.col(0), P.col(2) - P.col(0));
  if (total == 0.0) throw std::domain_error("barycentric query on a degenerate layout");
  Eigen::Vector3d u;
  u[0] = cross2(P.col(2) - P.col(1), x - P.col(1)) / total;
  u[1] = cross2(P.col(0) - P.col(2), x - P.col(2)) / total;
  u[2] = 1.0 - u[0] - u[1];
  return u;
}

double worst_triangle_slack(const HalfedgeMesh& mesh, const Eigen::VectorXd& lengths) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.face_capacity(); ++f) {
    if (!mesh.face_alive(f)) continue;
    const auto hs = mesh.face_halfedges(f);
    const double a = lengths[mesh.edge(hs[0])];
    const double b = lengths[mesh.edge(hs[1])];
    const double c = lengths[mesh.edge(hs[2])];
    worst = std::max({worst, a - b - c, b - c - a, c - a - b});
  }
  return worst;
}

MollifyResult mollify(const HalfedgeMesh& mesh, Eigen::VectorXd& lengths, double eps_rel) {
  double sum = 0.0, longest = 0.0;
  int live = 0;
  for (int e = 0; e < mesh.edge_capacity(); ++e) {
    if (!mesh.edge_alive(e)) continue;
    sum += lengths[e];
    longest = std::max(longest, lengths[e]);
    ++live;
  }
  if (live == 0) return {};
  const double h = sum / live;
  const double worst = worst_triangle_slack(mesh, lengths);
  if (worst + eps_rel * h <= 0.0) return {};

  // smallest delta with (l_ij+d)+(l_jk+d) >= (l_ki+d) + eps*(h+d) everywhere.
  // The extra term rides above roundoff in the slack recheck, which cancels
  // numbers of size `longest`, so a second call is a no-op.
  const double delta = (eps_rel * h + worst) / (1.0 - eps_rel) +
                       512.0 * std::numeric_limits<double>::epsilon() * longest;
  for (int e = 0; e < mesh.edge_capacity(); ++e)
    if (mesh.edge_alive(e)) lengths[e] += delta;
  return {delta, true};
}

Eigen::Vector3d recover_barycentric(const std::vector<RegionCorner>& corners,
                                    const Eigen::Vector2d& query, bool* degenerate) {
  const int m = static_cast<int>(corners.size());
  if (m == 0) throw std::invalid_argument("recover_barycentric needs corners");
  // affine interpolation constraints: weights reproduce the query position
  // and sum to one; any solution gives the same u when u is affine in v
  Eigen::MatrixXd A(3, m);
  for (int c = 0; c < m; ++c) {
    A(0, c) = corners[c].v.x();
    A(1, c) = corners[c].v.y();
    A(2, c) = 1.0;
  }
  Eigen::Vector3d rhs(query.x(), query.y(), 1.0);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  // scale-aware rank cut; corner spreads far below the coordinate magnitude
  // count as collinear
  cod.setThreshold(1e-12);
  const Eigen::VectorXd xi = cod.solve(rhs);
  if (degenerate) *degenerate = cod.rank() < 3;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  for (int c = 0; c < m; ++c) u += xi[c] * corners[c].u;
  return u;
}

}  // namespace itri
