#ifndef MCCF_CORE_DATASET_HPP
#define MCCF_CORE_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/rating_scale.hpp"
#include "linalg/sparse_matrix.hpp"

namespace mccf {

/// Bijection between external ids and dense indices, assigned in
/// first-appearance order.
class IdIndex {
 public:
  Index insert(std::string_view id);
  std::optional<Index> find(std::string_view id) const;
  const std::string& external(Index index) const { return ids_.at(index); }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> lookup_;
};

struct RatingRecord {
  std::string user_id;
  std::string item_id;
  double overall = 0.0;
  std::optional<std::int64_t> timestamp;
};

struct CriteriaRecord {
  std::string user_id;
  std::string item_id;
  std::vector<double> criteria;  // R1..Rk
  double overall = 0.0;          // R0
};

struct IngestReport {
  std::size_t records = 0;
  std::size_t duplicates = 0;
};

/// Sparse users x items matrix of overall ratings.
class Dataset {
 public:
  explicit Dataset(RatingScale scale = RatingScale::one_to_five());

  /// Later duplicates of a (user, item) cell overwrite earlier ones.
  static Dataset from_records(std::span<const RatingRecord> records, const RatingScale& scale,
                              IngestReport* report = nullptr);
  static Dataset from_indexed(IdIndex users, IdIndex items, std::vector<Triplet> triplets,
                              const RatingScale& scale);

  std::size_t num_users() const noexcept { return users_.size(); }
  std::size_t num_items() const noexcept { return items_.size(); }
  std::size_t num_ratings() const noexcept { return ratings_.nnz(); }

  const IdIndex& users() const noexcept { return users_; }
  const IdIndex& items() const noexcept { return items_; }
  const SparseMatrix& ratings() const noexcept { return ratings_; }
  const RatingScale& scale() const noexcept { return scale_; }

  std::span<const Entry> user_ratings(Index user) const { return ratings_.row(user); }
  std::span<const Entry> item_ratings(Index item) const { return ratings_.col(item); }
  std::optional<double> rating(Index user, Index item) const { return ratings_.at(user, item); }

  /// Mean over every item the user rated; 0 for users without ratings.
  double user_mean(Index user) const { return user_means_.at(user); }
  double global_mean() const noexcept { return global_mean_; }

  std::vector<RatingRecord> records() const;

 private:
  IdIndex users_;
  IdIndex items_;
  SparseMatrix ratings_;
  RatingScale scale_;
  std::vector<double> user_means_;
  double global_mean_ = 0.0;
};

struct DatasetStats {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t ratings = 0;
  double density = 0.0;
};

DatasetStats dataset_stats(const Dataset& d);

/// Sparse users x items x (k+1) tensor. Slice 0 holds the overall rating,
/// slices 1..k the criteria.
class CriteriaTensor {
 public:
  struct Cell {
    Index user;
    Index item;
  };

  CriteriaTensor(int criteria, RatingScale scale);

  /// Rejects records whose criteria count differs from k or whose values
  /// fall outside the scale. Later duplicates overwrite earlier ones.
  static CriteriaTensor from_records(std::span<const CriteriaRecord> records, int criteria,
                                     const RatingScale& scale, IngestReport* report = nullptr);

  int criteria() const noexcept { return k_; }
  std::size_t slices() const noexcept { return static_cast<std::size_t>(k_) + 1; }
  std::size_t num_users() const noexcept { return users_.size(); }
  std::size_t num_items() const noexcept { return items_.size(); }
  std::size_t num_cells() const noexcept { return cells_.size(); }

  const IdIndex& users() const noexcept { return users_; }
  const IdIndex& items() const noexcept { return items_; }
  const RatingScale& scale() const noexcept { return scale_; }
  std::span<const Cell> cells() const noexcept { return cells_; }
  std::span<const double> values(std::size_t cell) const {
    return {values_.data() + cell * slices(), slices()};
  }
  std::optional<std::size_t> find(Index user, Index item) const;

  /// Slice s in 0..k as a Dataset sharing this tensor's index maps.
  Dataset slice(std::size_t s) const;
  Dataset overall_slice() const { return slice(0); }
  /// c in 1..k; throws Error(criterion_out_of_range) otherwise.
  Dataset criteria_slice(int c) const;

  std::vector<CriteriaRecord> records() const;

 private:
  int k_;
  RatingScale scale_;
  IdIndex users_;
  IdIndex items_;
  std::vector<Cell> cells_;
  std::vector<double> values_;
  std::unordered_map<std::uint64_t, std::size_t> cell_lookup_;
};

}  // namespace mccf

#endif
