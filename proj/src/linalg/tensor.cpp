#include "linalg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "linalg/decompositions.hpp"

namespace mccf {

using Eigen::Index;
using Eigen::MatrixXd;

namespace {

void check_mode(int mode) {
  if (mode < 1 || mode > 3) fail(ErrorCode::invalid_argument, "tensor mode must be 1, 2 or 3");
}

}  // namespace

Tensor3::Tensor3(Dims3 dims, double fill)
    : dims_(dims), data_(dims[0] * dims[1] * dims[2], fill) {}

double Tensor3::norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

MatrixXd mode_unfold(const Tensor3& t, int mode) {
  check_mode(mode);
  const auto [n1, n2, n3] = t.dims();
  MatrixXd out;
  switch (mode) {
    case 1:
      out.resize(static_cast<Index>(n1), static_cast<Index>(n2 * n3));
      for (std::size_t l = 0; l < n3; ++l)
        for (std::size_t j = 0; j < n2; ++j)
          for (std::size_t i = 0; i < n1; ++i)
            out(static_cast<Index>(i), static_cast<Index>(l * n2 + j)) = t(i, j, l);
      break;
    case 2:
      out.resize(static_cast<Index>(n2), static_cast<Index>(n1 * n3));
      for (std::size_t l = 0; l < n3; ++l)
        for (std::size_t j = 0; j < n2; ++j)
          for (std::size_t i = 0; i < n1; ++i)
            out(static_cast<Index>(j), static_cast<Index>(i * n3 + l)) = t(i, j, l);
      break;
    default:
      out.resize(static_cast<Index>(n3), static_cast<Index>(n1 * n2));
      for (std::size_t l = 0; l < n3; ++l)
        for (std::size_t j = 0; j < n2; ++j)
          for (std::size_t i = 0; i < n1; ++i)
            out(static_cast<Index>(l), static_cast<Index>(j * n1 + i)) = t(i, j, l);
      break;
  }
  return out;
}

Tensor3 mode_refold(const MatrixXd& m, int mode, Dims3 dims) {
  check_mode(mode);
  const auto [n1, n2, n3] = dims;
  const std::size_t rows = dims[static_cast<std::size_t>(mode - 1)];
  if (static_cast<std::size_t>(m.rows()) != rows ||
      static_cast<std::size_t>(m.cols()) * rows != n1 * n2 * n3)
    fail(ErrorCode::dimension_mismatch, "refold: matrix shape does not match tensor dims");
  Tensor3 t(dims);
  for (std::size_t l = 0; l < n3; ++l)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t i = 0; i < n1; ++i) {
        switch (mode) {
          case 1: t(i, j, l) = m(static_cast<Index>(i), static_cast<Index>(l * n2 + j)); break;
          case 2: t(i, j, l) = m(static_cast<Index>(j), static_cast<Index>(i * n3 + l)); break;
          default: t(i, j, l) = m(static_cast<Index>(l), static_cast<Index>(j * n1 + i)); break;
        }
      }
  return t;
}

Tensor3 mode_product(const Tensor3& t, const MatrixXd& m, int mode) {
  check_mode(mode);
  if (static_cast<std::size_t>(m.cols()) != t.dim(mode))
    fail(ErrorCode::dimension_mismatch,
         "mode-" + std::to_string(mode) + " product: matrix has " + std::to_string(m.cols()) +
             " columns, tensor mode has size " + std::to_string(t.dim(mode)));
  Dims3 dims = t.dims();
  dims[static_cast<std::size_t>(mode - 1)] = static_cast<std::size_t>(m.rows());
  return mode_refold(m * mode_unfold(t, mode), mode, dims);
}

TuckerModel hosvd(const Tensor3& t, Dims3 ranks, const SsvdOptions& options) {
  TuckerModel model;
  for (int mode = 1; mode <= 3; ++mode) {
    const std::size_t s = static_cast<std::size_t>(mode - 1);
    const std::size_t size = t.dims()[s];
    const std::size_t rank = ranks[s];
    if (rank < 1 || rank > size)
      fail(ErrorCode::rank, "mode-" + std::to_string(mode) + " rank " + std::to_string(rank) +
                                " outside 1.." + std::to_string(size));
    const MatrixXd unfolded = mode_unfold(t, mode);
    const auto limit = static_cast<std::size_t>(std::min(unfolded.rows(), unfolded.cols()));
    const std::size_t k = std::min(rank, limit);
    SsvdOptions opts = options;
    opts.oversample = std::min(options.oversample, limit - k);
    opts.seed = options.seed + s;
    MatrixXd u = ssvd(unfolded, k, opts).u;
    // A mode larger than the product of the other two cannot supply `rank`
    // singular vectors; pad with an orthonormal completion.
    model.factors[s] = k < rank ? orthonormal_completion(u, rank) : std::move(u);
  }
  Tensor3 core = mode_product(t, model.factors[0].transpose(), 1);
  core = mode_product(core, model.factors[1].transpose(), 2);
  model.core = mode_product(core, model.factors[2].transpose(), 3);
  return model;
}

Tensor3 tucker_reconstruct(const TuckerModel& model) {
  Tensor3 out = mode_product(model.core, model.factors[0], 1);
  out = mode_product(out, model.factors[1], 2);
  return mode_product(out, model.factors[2], 3);
}

}  // namespace mccf
