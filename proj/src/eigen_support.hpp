#pragma once

// Internal Eigen bridging; not installed. Eigen stays out of public headers.

#include <Eigen/Dense>

#include "normsplit/matrix.hpp"

namespace normsplit::detail {

inline Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      m(i, j) = a(i, j);
    }
  }
  return m;
}

/// Orthonormal basis of the row space of A as columns of an n x r matrix,
/// r = A.rank(). Uses the top right singular vectors so that the projected
/// Gram matrix is well conditioned.
inline Eigen::MatrixXd row_space_basis(const Matrix& a) {
  const int r = a.rank();
  if (r == 0) {
    return Eigen::MatrixXd(a.cols(), 0);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a), Eigen::ComputeThinV);
  return svd.matrixV().leftCols(r);
}

}  // namespace normsplit::detail
