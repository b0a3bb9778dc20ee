#ifndef MCCF_LINALG_IMPUTE_HPP
#define MCCF_LINALG_IMPUTE_HPP

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "linalg/sparse_matrix.hpp"

namespace mccf {

enum class ImputeStrategy { item_mean, user_mean, global_mean, zero };

std::optional<ImputeStrategy> parse_impute_strategy(std::string_view name);

/// Dense copy of `sparse` with missing cells filled. Column (item) and row
/// (user) means fall back to the global mean for empty columns/rows.
/// Throws Error(empty_input) when nothing is observed.
Eigen::MatrixXd impute_missing(const SparseMatrix& sparse, ImputeStrategy strategy);

}  // namespace mccf

#endif
