#ifndef MCCF_LINALG_DECOMPOSITIONS_HPP
#define MCCF_LINALG_DECOMPOSITIONS_HPP

#include <cstddef>

#include <Eigen/Dense>

namespace mccf {

/// Thin orthonormal basis of the columns of `y` (rows >= cols) from
/// Householder reflections. Zero or dependent columns still receive an
/// orthonormal column, so the result always has orthonormal columns.
Eigen::MatrixXd householder_orthonormal_basis(const Eigen::MatrixXd& y);

/// Extends orthonormal columns `q` to `cols` orthonormal columns. The leading
/// columns of the result equal those of `q`.
Eigen::MatrixXd orthonormal_completion(const Eigen::MatrixXd& q, std::size_t cols);

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

/// Cyclic Jacobi eigensolver for a symmetric matrix. Only the upper triangle
/// is read. Eigenvectors follow the sign convention of `fix_column_signs`.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& s);

/// Flips columns so that each column's largest-magnitude coordinate (first
/// one on ties) is non-negative. Returns +1/-1 per column.
Eigen::VectorXd fix_column_signs(Eigen::MatrixXd& m);

}  // namespace mccf

#endif
