#ifndef MCCF_LINALG_SSVD_HPP
#define MCCF_LINALG_SSVD_HPP

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace mccf {

/// Truncated SVD factors: A_k = U_k diag(sigma) V_k^T.
struct FactorModel {
  Eigen::MatrixXd u;      // m x k, orthonormal columns
  Eigen::VectorXd sigma;  // k, non-increasing, non-negative
  Eigen::MatrixXd v;      // n x k, orthonormal columns

  std::size_t rank() const noexcept { return static_cast<std::size_t>(sigma.size()); }
  Eigen::MatrixXd reconstruct() const;
  /// Rows of V_k diag(sigma): one latent vector per column of A.
  Eigen::MatrixXd column_latent() const;
};

struct SsvdOptions {
  std::size_t oversample = 10;
  std::size_t power_iters = 2;
  std::uint64_t seed = 0;
};

/// Randomized truncated SVD.
///
///   G  = n x (k+p) standard Gaussian sketch (seeded)
///   Y  = A G, Q = orth(Y), refined by `power_iters` rounds of
///        Q <- orth(A orth(A^T Q))
///   B  = Q^T A
///   B B^T = X S^2 X^T        (dense symmetric eigensolver)
///   U_k = Q X,  V_k = B^T X S^-1,  sigma = S   truncated to k
///
/// Singular values below 1e-12 * sigma_1 are set to zero and the matching
/// V_k columns are replaced by an orthonormal completion. Each U_k column's
/// largest-magnitude entry is non-negative (V_k flips with it).
///
/// Requires 1 <= k and k + oversample <= min(m, n); throws Error(rank).
FactorModel ssvd(const Eigen::MatrixXd& a, std::size_t k, const SsvdOptions& options = {});

/// ssvd with oversample = min(10, min(m, n) - k), two power iterations and
/// seed 0.
FactorModel truncated_svd(const Eigen::MatrixXd& a, std::size_t k);

}  // namespace mccf

#endif
