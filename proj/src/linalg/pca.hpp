#ifndef MCCF_LINALG_PCA_HPP
#define MCCF_LINALG_PCA_HPP

#include <cstddef>

#include <Eigen/Dense>

namespace mccf {

struct PcaModel {
  Eigen::VectorXd mean;         // per-variable column means
  Eigen::MatrixXd components;   // variables x k, orthonormal columns
  Eigen::VectorXd eigenvalues;  // k, non-increasing, non-negative
};

/// PCA of observations (rows) x variables (columns) through the covariance
/// matrix Xc^T Xc / (obs - 1). Needs at least two observations and
/// 1 <= k <= variables.
PcaModel pca(const Eigen::MatrixXd& x, std::size_t k);

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& scores);

}  // namespace mccf

#endif
