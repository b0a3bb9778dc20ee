#include "linalg/pca.hpp"

#include <algorithm>
#include <string>

#include "core/error.hpp"
#include "linalg/decompositions.hpp"

namespace mccf {

using Eigen::Index;
using Eigen::MatrixXd;

PcaModel pca(const MatrixXd& x, std::size_t k) {
  if (x.rows() < 2) fail(ErrorCode::invalid_argument, "PCA needs at least 2 observations");
  if (k < 1 || k > static_cast<std::size_t>(x.cols()))
    fail(ErrorCode::rank, "PCA rank " + std::to_string(k) + " outside 1.." +
                              std::to_string(x.cols()));
  if (!x.allFinite()) fail(ErrorCode::invalid_argument, "PCA input has non-finite entries");

  PcaModel model;
  model.mean = x.colwise().mean().transpose();
  const MatrixXd centered = x.rowwise() - model.mean.transpose();
  const MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);

  const SymmetricEigen eig = symmetric_eigen(cov);
  const Index kk = static_cast<Index>(k);
  model.components = eig.vectors.leftCols(kk);
  model.eigenvalues = eig.values.head(kk).cwiseMax(0.0);
  return model;
}

MatrixXd pca_project(const PcaModel& model, const MatrixXd& x) {
  if (x.cols() != model.mean.size())
    fail(ErrorCode::dimension_mismatch, "PCA projection: column count differs from model");
  return (x.rowwise() - model.mean.transpose()) * model.components;
}

MatrixXd pca_reconstruct(const PcaModel& model, const MatrixXd& scores) {
  if (scores.cols() != model.components.cols())
    fail(ErrorCode::dimension_mismatch, "PCA reconstruction: score width differs from model");
  MatrixXd out = scores * model.components.transpose();
  out.rowwise() += model.mean.transpose();
  return out;
}

}  // namespace mccf
