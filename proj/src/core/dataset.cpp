#include "core/dataset.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace mccf {

namespace {

std::uint64_t cell_key(Index user, Index item) {
  return (static_cast<std::uint64_t>(user) << 32) | item;
}

void check_in_scale(double v, const RatingScale& scale) {
  if (!std::isfinite(v) || !scale.contains(v))
    fail(ErrorCode::out_of_scale, "rating " + std::to_string(v) + " outside scale [" +
                                      std::to_string(scale.min_value()) + ", " +
                                      std::to_string(scale.max_value()) + "]");
}

}  // namespace

Index IdIndex::insert(std::string_view id) {
  auto [it, inserted] = lookup_.try_emplace(std::string(id), static_cast<Index>(ids_.size()));
  if (inserted) {
    if (ids_.size() >= std::numeric_limits<Index>::max())
      fail(ErrorCode::invalid_argument, "too many distinct ids");
    ids_.emplace_back(id);
  }
  return it->second;
}

std::optional<Index> IdIndex::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Dataset::Dataset(RatingScale scale) : scale_(std::move(scale)) {}

Dataset Dataset::from_records(std::span<const RatingRecord> records, const RatingScale& scale,
                              IngestReport* report) {
  IdIndex users;
  IdIndex items;
  std::vector<Triplet> triplets;
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::size_t duplicates = 0;
  for (const auto& r : records) {
    check_in_scale(r.overall, scale);
    Index u = users.insert(r.user_id);
    Index i = items.insert(r.item_id);
    auto [it, inserted] = seen.try_emplace(cell_key(u, i), triplets.size());
    if (inserted) {
      triplets.push_back({u, i, r.overall});
    } else {
      triplets[it->second].value = r.overall;
      ++duplicates;
    }
  }
  if (report) *report = IngestReport{records.size(), duplicates};
  return from_indexed(std::move(users), std::move(items), std::move(triplets), scale);
}

Dataset Dataset::from_indexed(IdIndex users, IdIndex items, std::vector<Triplet> triplets,
                              const RatingScale& scale) {
  for (const auto& t : triplets) check_in_scale(t.value, scale);
  Dataset d(scale);
  d.ratings_ = SparseMatrix(users.size(), items.size(), std::move(triplets));
  d.users_ = std::move(users);
  d.items_ = std::move(items);
  d.user_means_.assign(d.num_users(), 0.0);
  double total = 0.0;
  for (std::size_t u = 0; u < d.num_users(); ++u) {
    double sum = 0.0;
    auto row = d.ratings_.row(u);
    for (const auto& e : row) sum += e.value;
    total += sum;
    if (!row.empty()) d.user_means_[u] = sum / static_cast<double>(row.size());
  }
  if (d.num_ratings() > 0) d.global_mean_ = total / static_cast<double>(d.num_ratings());
  return d;
}

std::vector<RatingRecord> Dataset::records() const {
  std::vector<RatingRecord> out;
  out.reserve(num_ratings());
  for (const auto& t : ratings_.triplets())
    out.push_back({users_.external(t.row), items_.external(t.col), t.value, std::nullopt});
  return out;
}

DatasetStats dataset_stats(const Dataset& d) {
  DatasetStats s{d.num_users(), d.num_items(), d.num_ratings(), 0.0};
  if (s.users > 0 && s.items > 0)
    s.density = static_cast<double>(s.ratings) /
                (static_cast<double>(s.users) * static_cast<double>(s.items));
  return s;
}

CriteriaTensor::CriteriaTensor(int criteria, RatingScale scale)
    : k_(criteria), scale_(std::move(scale)) {
  if (criteria < 1) fail(ErrorCode::invalid_argument, "criteria count must be at least 1");
}

CriteriaTensor CriteriaTensor::from_records(std::span<const CriteriaRecord> records,
                                            int criteria, const RatingScale& scale,
                                            IngestReport* report) {
  CriteriaTensor t(criteria, scale);
  std::size_t duplicates = 0;
  const std::size_t width = t.slices();
  for (const auto& r : records) {
    if (r.criteria.size() != static_cast<std::size_t>(criteria))
      fail(ErrorCode::invalid_argument, "record has " + std::to_string(r.criteria.size()) +
                                            " criteria, expected " + std::to_string(criteria));
    check_in_scale(r.overall, scale);
    for (double c : r.criteria) check_in_scale(c, scale);
    Index u = t.users_.insert(r.user_id);
    Index i = t.items_.insert(r.item_id);
    auto [it, inserted] = t.cell_lookup_.try_emplace(cell_key(u, i), t.cells_.size());
    std::size_t cell = it->second;
    if (inserted) {
      t.cells_.push_back({u, i});
      t.values_.resize(t.values_.size() + width);
    } else {
      ++duplicates;
    }
    double* dst = t.values_.data() + cell * width;
    dst[0] = r.overall;
    for (std::size_t c = 0; c < r.criteria.size(); ++c) dst[c + 1] = r.criteria[c];
  }
  if (report) *report = IngestReport{records.size(), duplicates};
  return t;
}

std::optional<std::size_t> CriteriaTensor::find(Index user, Index item) const {
  auto it = cell_lookup_.find(cell_key(user, item));
  if (it == cell_lookup_.end()) return std::nullopt;
  return it->second;
}

Dataset CriteriaTensor::slice(std::size_t s) const {
  if (s >= slices())
    fail(ErrorCode::criterion_out_of_range, "slice " + std::to_string(s) + " out of range");
  std::vector<Triplet> triplets;
  triplets.reserve(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c)
    triplets.push_back({cells_[c].user, cells_[c].item, values_[c * slices() + s]});
  return Dataset::from_indexed(users_, items_, std::move(triplets), scale_);
}

Dataset CriteriaTensor::criteria_slice(int c) const {
  if (c < 1 || c > k_)
    fail(ErrorCode::criterion_out_of_range,
         "criterion " + std::to_string(c) + " outside 1.." + std::to_string(k_));
  return slice(static_cast<std::size_t>(c));
}

std::vector<CriteriaRecord> CriteriaTensor::records() const {
  std::vector<CriteriaRecord> out;
  out.reserve(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto v = values(c);
    out.push_back({users_.external(cells_[c].user), items_.external(cells_[c].item),
                   std::vector<double>(v.begin() + 1, v.end()), v[0]});
  }
  return out;
}

}  // namespace mccf
