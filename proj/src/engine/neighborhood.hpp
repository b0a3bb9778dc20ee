#ifndef MCCF_ENGINE_NEIGHBORHOOD_HPP
#define MCCF_ENGINE_NEIGHBORHOOD_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "core/dataset.hpp"
#include "similarity/similarity.hpp"

namespace mccf {

enum class Weighting {
  positive,    // neighbours with sim <= 0 dropped; sum s r / sum |s|
  signed_abs,  // all neighbours; sum s r / sum |s|
  signed_sum,  // all neighbours; sum s r / sum s
};

std::string_view to_string(Weighting w);
/// "positive", "signed-abs", "signed".
std::optional<Weighting> parse_weighting(std::string_view name);

struct NeighborhoodSpec {
  /// Unset means every usable neighbour.
  std::optional<std::size_t> max_neighbors;
  /// Neighbours below this similarity are dropped.
  std::optional<double> min_similarity;
  Weighting weighting = Weighting::positive;
  /// Fewer usable neighbours than this gives no prediction.
  std::size_t min_support = 1;
};

void validate(const NeighborhoodSpec& spec);

struct Prediction {
  Index user;
  Index item;
  double value;
  std::size_t support;
};

/// A neighbour of the target item that the user rated.
struct Neighbor {
  Index item;
  double similarity;
  double rating;
};

/// Neighbours of `item` rated by `user`, filtered and truncated per spec,
/// ascending by item index. Truncation keeps the most similar (lower index on
/// ties).
std::vector<Neighbor> select_neighbors(Index user, Index item, const Dataset& d,
                                       const SimilarityStore& sims, const NeighborhoodSpec& spec);

/// sum s r over the weight sum of `weighting`, unclamped. std::nullopt when
/// the weight sum is below 1e-12 in magnitude or there are no neighbours.
std::optional<double> weighted_average(std::span<const Neighbor> neighbors, Weighting weighting);

/// Weighted mean of neighbour ratings clamped to the scale. std::nullopt when
/// the user or item is unknown, support is too small or the weight sum is
/// below 1e-12 in magnitude.
std::optional<Prediction> predict_single(Index user, Index item, const Dataset& d,
                                         const SimilarityStore& sims,
                                         const NeighborhoodSpec& spec);

/// Predictions for every item the user has not rated, ascending by item.
std::vector<Prediction> predict_unrated(Index user, const Dataset& d, const SimilarityStore& sims,
                                        const NeighborhoodSpec& spec);

/// Orders by value descending, then item ascending, and keeps the first n.
void rank_top_n(std::vector<Prediction>& predictions, std::size_t n);

/// Top-n unrated items for a user. Unknown users get an empty list.
std::vector<Prediction> recommend_top_n(Index user, const Dataset& d, const SimilarityStore& sims,
                                        const NeighborhoodSpec& spec, std::size_t n);

}  // namespace mccf

#endif
