#include "linalg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace mccf {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols)
      fail(ErrorCode::dimension_mismatch, "sparse entry outside matrix bounds");
    if (!std::isfinite(t.value)) fail(ErrorCode::invalid_argument, "sparse entry is not finite");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 1; k < triplets.size(); ++k) {
    if (triplets[k].row == triplets[k - 1].row && triplets[k].col == triplets[k - 1].col)
      fail(ErrorCode::invalid_argument, "duplicate sparse cell (" +
                                            std::to_string(triplets[k].row) + ", " +
                                            std::to_string(triplets[k].col) + ")");
  }

  row_ptr_.assign(rows + 1, 0);
  col_ptr_.assign(cols + 1, 0);
  for (const auto& t : triplets) {
    ++row_ptr_[t.row + 1];
    ++col_ptr_[t.col + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr_[r + 1] += row_ptr_[r];
  for (std::size_t c = 0; c < cols; ++c) col_ptr_[c + 1] += col_ptr_[c];

  row_entries_.resize(triplets.size());
  col_entries_.resize(triplets.size());
  std::vector<std::size_t> col_fill(col_ptr_.begin(), col_ptr_.end() - 1);
  // Triplets are row-major, so each column receives rows in ascending order.
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    row_entries_[k] = Entry{t.col, t.value};
    col_entries_[col_fill[t.col]++] = Entry{t.row, t.value};
  }
}

std::span<const Entry> SparseMatrix::row(std::size_t r) const {
  return {row_entries_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
}

std::span<const Entry> SparseMatrix::col(std::size_t c) const {
  return {col_entries_.data() + col_ptr_[c], col_ptr_[c + 1] - col_ptr_[c]};
}

std::optional<double> SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto entries = row(r);
  auto it = std::lower_bound(entries.begin(), entries.end(), c,
                             [](const Entry& e, std::size_t v) { return e.index < v; });
  if (it == entries.end() || it->index != c) return std::nullopt;
  return it->value;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& e : row(r)) out.push_back({static_cast<Index>(r), e.index, e.value});
  return out;
}

Eigen::MatrixXd SparseMatrix::to_dense(double fill) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rows_),
                                                  static_cast<Eigen::Index>(cols_), fill);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& e : row(r)) out(static_cast<Eigen::Index>(r), e.index) = e.value;
  return out;
}

}  // namespace mccf
