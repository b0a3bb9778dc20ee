#ifndef MCCF_LINALG_SPARSE_MATRIX_HPP
#define MCCF_LINALG_SPARSE_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mccf {

using Index = std::uint32_t;

struct Entry {
  Index index;
  double value;
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Immutable sparse matrix with both row-major and column-major traversal.
/// Entries inside a row (column) are sorted by column (row) index.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Throws on out-of-range indices, non-finite values or duplicate cells.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return row_entries_.size(); }

  std::span<const Entry> row(std::size_t r) const;
  std::span<const Entry> col(std::size_t c) const;
  std::optional<double> at(std::size_t r, std::size_t c) const;

  /// Row-major order.
  std::vector<Triplet> triplets() const;
  Eigen::MatrixXd to_dense(double fill = 0.0) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> row_entries_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<Entry> col_entries_;
};

}  // namespace mccf

#endif
