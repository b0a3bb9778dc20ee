#include "linalg/impute.hpp"

#include <vector>

#include "core/error.hpp"

namespace mccf {

std::optional<ImputeStrategy> parse_impute_strategy(std::string_view name) {
  if (name == "item_mean") return ImputeStrategy::item_mean;
  if (name == "user_mean") return ImputeStrategy::user_mean;
  if (name == "global_mean") return ImputeStrategy::global_mean;
  if (name == "zero") return ImputeStrategy::zero;
  return std::nullopt;
}

Eigen::MatrixXd impute_missing(const SparseMatrix& sparse, ImputeStrategy strategy) {
  if (sparse.nnz() == 0) fail(ErrorCode::empty_input, "cannot impute an entirely empty matrix");

  double total = 0.0;
  for (std::size_t r = 0; r < sparse.rows(); ++r)
    for (const auto& e : sparse.row(r)) total += e.value;
  const double global = total / static_cast<double>(sparse.nnz());

  auto mean_or_global = [global](std::span<const Entry> entries) {
    if (entries.empty()) return global;
    double s = 0.0;
    for (const auto& e : entries) s += e.value;
    return s / static_cast<double>(entries.size());
  };

  const auto rows = static_cast<Eigen::Index>(sparse.rows());
  const auto cols = static_cast<Eigen::Index>(sparse.cols());
  Eigen::MatrixXd out(rows, cols);
  switch (strategy) {
    case ImputeStrategy::item_mean:
      for (Eigen::Index c = 0; c < cols; ++c)
        out.col(c).setConstant(mean_or_global(sparse.col(static_cast<std::size_t>(c))));
      break;
    case ImputeStrategy::user_mean:
      for (Eigen::Index r = 0; r < rows; ++r)
        out.row(r).setConstant(mean_or_global(sparse.row(static_cast<std::size_t>(r))));
      break;
    case ImputeStrategy::global_mean:
      out.setConstant(global);
      break;
    case ImputeStrategy::zero:
      out.setZero();
      break;
  }
  for (std::size_t r = 0; r < sparse.rows(); ++r)
    for (const auto& e : sparse.row(r)) out(static_cast<Eigen::Index>(r), e.index) = e.value;
  return out;
}

}  // namespace mccf
