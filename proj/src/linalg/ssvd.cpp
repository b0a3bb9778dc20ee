#include "linalg/ssvd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "core/error.hpp"
#include "linalg/decompositions.hpp"

namespace mccf {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd FactorModel::reconstruct() const { return u * sigma.asDiagonal() * v.transpose(); }

MatrixXd FactorModel::column_latent() const { return v * sigma.asDiagonal(); }

FactorModel ssvd(const MatrixXd& a, std::size_t k, const SsvdOptions& options) {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  const std::size_t limit = std::min(m, n);
  if (k < 1 || k > limit)
    fail(ErrorCode::rank, "rank " + std::to_string(k) + " outside 1.." + std::to_string(limit));
  const std::size_t width = k + options.oversample;
  if (width > limit)
    fail(ErrorCode::rank, "rank + oversample (" + std::to_string(width) + ") exceeds " +
                              std::to_string(limit));
  if (!a.allFinite()) fail(ErrorCode::invalid_argument, "matrix has non-finite entries");

  const Index l = static_cast<Index>(width);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd g(static_cast<Index>(n), l);
  for (Index j = 0; j < l; ++j)
    for (Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);

  MatrixXd q = householder_orthonormal_basis(a * g);
  for (std::size_t it = 0; it < options.power_iters; ++it) {
    MatrixXd z = householder_orthonormal_basis(a.transpose() * q);
    q = householder_orthonormal_basis(a * z);
  }

  const MatrixXd b = q.transpose() * a;  // l x n
  MatrixXd bbt = b * b.transpose();
  bbt = 0.5 * (bbt + bbt.transpose());
  const SymmetricEigen eig = symmetric_eigen(bbt);

  const Index kk = static_cast<Index>(k);
  FactorModel out;
  out.sigma = VectorXd(kk);
  for (Index i = 0; i < kk; ++i) out.sigma(i) = std::sqrt(std::max(eig.values(i), 0.0));
  const double cutoff = 1e-12 * out.sigma(0);
  for (Index i = 0; i < kk; ++i)
    if (out.sigma(i) <= cutoff) out.sigma(i) = 0.0;

  const MatrixXd x = eig.vectors.leftCols(kk);
  out.u = q * x;
  MatrixXd v = MatrixXd::Zero(static_cast<Index>(n), kk);
  for (Index i = 0; i < kk; ++i)
    if (out.sigma(i) > 0.0) v.col(i) = b.transpose() * x.col(i) / out.sigma(i);

  // Re-orthonormalize V in sigma order; zero-sigma columns become the completion.
  MatrixXd vq = householder_orthonormal_basis(v);
  for (Index i = 0; i < kk; ++i) {
    if (out.sigma(i) > 0.0 && vq.col(i).dot(v.col(i)) < 0.0) vq.col(i) *= -1.0;
  }
  out.v = std::move(vq);

  const VectorXd signs = fix_column_signs(out.u);
  for (Index i = 0; i < kk; ++i) {
    if (out.sigma(i) > 0.0) {
      out.v.col(i) *= signs(i);
    } else {
      MatrixXd col = out.v.col(i);
      fix_column_signs(col);
      out.v.col(i) = col;
    }
  }
  return out;
}

FactorModel truncated_svd(const MatrixXd& a, std::size_t k) {
  const auto limit = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  SsvdOptions options;
  options.oversample = k <= limit ? std::min<std::size_t>(10, limit - k) : 0;
  return ssvd(a, k, options);
}

}  // namespace mccf
