#ifndef MCCF_LINALG_TENSOR_HPP
#define MCCF_LINALG_TENSOR_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "linalg/ssvd.hpp"

namespace mccf {

using Dims3 = std::array<std::size_t, 3>;

/// Dense third-order tensor, first index fastest.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Dims3 dims, double fill = 0.0);

  const Dims3& dims() const noexcept { return dims_; }
  std::size_t dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode - 1)); }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t l) {
    return data_[i + dims_[0] * (j + dims_[1] * l)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t l) const {
    return data_[i + dims_[0] * (j + dims_[1] * l)];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  double norm() const;

 private:
  Dims3 dims_{0, 0, 0};
  std::vector<double> data_;
};

/// Mode-s unfolding (s in 1..3), columns in cyclic order:
///   mode 1: column i3 * I2 + i2
///   mode 2: column i1 * I3 + i3
///   mode 3: column i2 * I1 + i1
Eigen::MatrixXd mode_unfold(const Tensor3& t, int mode);
Tensor3 mode_refold(const Eigen::MatrixXd& m, int mode, Dims3 dims);

/// T x_s M: the result's mode-s unfolding is M * unfold(T, s).
Tensor3 mode_product(const Tensor3& t, const Eigen::MatrixXd& m, int mode);

struct TuckerModel {
  Tensor3 core;                          // r1 x r2 x r3
  std::array<Eigen::MatrixXd, 3> factors;  // I_s x r_s, orthonormal columns
};

/// HOSVD: each factor holds the leading left singular vectors of the
/// matching unfolding (via ssvd; oversampling shrinks to fit small modes),
/// and core = T x1 U1^T x2 U2^T x3 U3^T.
TuckerModel hosvd(const Tensor3& t, Dims3 ranks, const SsvdOptions& options = {});
Tensor3 tucker_reconstruct(const TuckerModel& model);

}  // namespace mccf

#endif
