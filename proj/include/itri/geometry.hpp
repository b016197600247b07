#pragma once

#include <vector>

#include <Eigen/Core>

#include "itri/halfedge_mesh.hpp"

namespace itri {

// Metric quantities for a triangle given as edge lengths (l_ij, l_jk, l_ki).
// Corner order matches the vertex order i, j, k.

struct CornerAnglesArea {
  Eigen::Vector3d theta;  // interior angle at i, j, k
  double area = 0.0;
};

// Interior angle between sides b and c, with side a opposite. atan2 half-angle
// form, stable for needle and cap triangles; degenerate inputs give 0 or pi.
double corner_angle(double a, double b, double c);

// Heron's rule evaluated in the numerically stable sorted form.
double triangle_area(double a, double b, double c);

CornerAnglesArea corner_angles_and_area(double l_ij, double l_jk, double l_ki);

// cot of the angle opposite side a; used by the Delaunay test and cotan weights.
double corner_cotangent(double a, double b, double c);

// Length of the barycentric displacement du (entries summing to 0) inside a
// triangle with lengths l = (l_ij, l_jk, l_ki).
double displacement_length(const Eigen::Vector3d& l, const Eigen::Vector3d& du);

// Circumcenter in normalized barycentric coordinates; entries can leave [0,1]
// when the center falls outside the triangle. Throws on zero normalizer.
Eigen::Vector3d circumcenter_barycentric(double l_ij, double l_jk, double l_ki);

// Columns are planar positions of i, j, k with P_i at the origin, P_j on the
// +x axis and P_k in the upper half plane.
Eigen::Matrix<double, 2, 3> layout_triangle(double l_ij, double l_jk, double l_ki);

// Places the apex C of triangle (A, B, C) from its distances to A and B, on
// the left of A->B (ccw) or the right. Clamps a tiny negative altitude to 0.
Eigen::Vector2d place_apex(const Eigen::Vector2d& A, const Eigen::Vector2d& B, double dist_a,
                           double dist_b, bool left = true);

// Barycentric coordinates of point x in the laid-out triangle with corner
// columns P (signed areas, so x may lie outside).
Eigen::Vector3d barycentric_in_layout(const Eigen::Matrix<double, 2, 3>& P,
                                      const Eigen::Vector2d& x);

// One corner of a planar region carrying two coordinate systems: a reference
// barycentric triple u and a layout position v.
struct RegionCorner {
  Eigen::Vector3d u;
  Eigen::Vector2d v;
};

// Reads the query's reference coordinates through the region corners: finds
// the least-norm affine weights reproducing the query in layout coordinates
// and applies them to the corners' u. Exact whenever u is an affine function
// of v over the region. Needs 3 corners spanning the plane; fewer or a rank
// drop degrade to the least-squares answer and set *degenerate.
Eigen::Vector3d recover_barycentric(const std::vector<RegionCorner>& corners,
                                    const Eigen::Vector2d& query, bool* degenerate = nullptr);

// Adds one global constant to every length when some corner is within
// eps_rel * (mean length) of violating the triangle inequality. Idempotent:
// a second call returns delta = 0.
struct MollifyResult {
  double delta = 0.0;
  bool changed = false;
};
MollifyResult mollify(const HalfedgeMesh& mesh, Eigen::VectorXd& lengths,
                      double eps_rel = 1e-5);

// Largest violation max(l_ki - l_ij - l_jk) over all faces and rotations;
// negative when every triangle inequality holds strictly.
double worst_triangle_slack(const HalfedgeMesh& mesh, const Eigen::VectorXd& lengths);

}  // namespace itri
