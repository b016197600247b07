#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "itri/common_subdivision.hpp"

namespace itri {

enum class TransferDirection { IntrinsicToInput, InputToIntrinsic };

struct TransferOptions {
  // systems with more unknowns than this use conjugate gradients instead of
  // a direct factorization
  int direct_size_limit = 100000;
  double cg_tolerance = 1e-12;
  int cg_max_iterations = 10000;
};

// L2 projection between the two piecewise linear spaces, measured over the
// overlay. Solves the normal equations of min |dst g - src f| in the overlay
// mass norm and keeps the factorization for repeated right hand sides.
class TransferOperator {
 public:
  TransferOperator(const IntrinsicTriangulation& tri, const CommonSubdivision& S,
                   TransferDirection direction, const TransferOptions& options = {});

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

  // squared mass norm distance between the interpolants of f and g
  double residual(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;

  TransferDirection direction() const { return direction_; }

 private:
  TransferDirection direction_;
  TransferOptions options_;
  Eigen::SparseMatrix<double> src_, dst_, mass_;
  Eigen::SparseMatrix<double> normal_;  // dst' M dst
  Eigen::SparseMatrix<double> cross_;   // dst' M src
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> direct_;
  bool use_direct_ = true;
};

Eigen::VectorXd transfer_l2(const IntrinsicTriangulation& tri, const CommonSubdivision& S,
                            const Eigen::VectorXd& f, TransferDirection direction,
                            const TransferOptions& options = {});

}  // namespace itri
