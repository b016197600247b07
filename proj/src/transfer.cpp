#include "itri/transfer.hpp"

#include <Eigen/IterativeLinearSolvers>

namespace itri {

TransferOperator::TransferOperator(const IntrinsicTriangulation& tri, const CommonSubdivision& S,
                                   TransferDirection direction, const TransferOptions& options)
    : direction_(direction), options_(options) {
  auto P = interpolation_matrices(tri, S);
  mass_ = mass_matrix(S).M;
  if (direction == TransferDirection::IntrinsicToInput) {
    src_ = std::move(P.onto_intrinsic);
    dst_ = std::move(P.onto_input);
  } else {
    src_ = std::move(P.onto_input);
    dst_ = std::move(P.onto_intrinsic);
  }
  normal_ = Eigen::SparseMatrix<double>(dst_.transpose() * mass_ * dst_).pruned();
  cross_ = Eigen::SparseMatrix<double>(dst_.transpose() * mass_ * src_).pruned();
  use_direct_ = normal_.rows() <= options_.direct_size_limit;
  if (use_direct_) {
    direct_.compute(normal_);
    if (direct_.info() != Eigen::Success)
      throw MeshError("projection system failed to factor");
  }
}

Eigen::VectorXd TransferOperator::apply(const Eigen::VectorXd& f) const {
  if (f.size() != src_.cols()) throw MeshError("transfer input has the wrong length");
  const Eigen::VectorXd rhs = cross_ * f;
  if (use_direct_) return direct_.solve(rhs);
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(options_.cg_tolerance);
  cg.setMaxIterations(options_.cg_max_iterations);
  cg.compute(normal_);
  const Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) throw MeshError("projection solve did not converge");
  return x;
}

double TransferOperator::residual(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
  const Eigen::VectorXd r = src_ * f - dst_ * g;
  return r.dot(mass_ * r);
}

Eigen::VectorXd transfer_l2(const IntrinsicTriangulation& tri, const CommonSubdivision& S,
                            const Eigen::VectorXd& f, TransferDirection direction,
                            const TransferOptions& options) {
  return TransferOperator(tri, S, direction, options).apply(f);
}

}  // namespace itri
