#include "engine/neighborhood.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace mccf {

namespace {

constexpr double kMinWeight = 1e-12;

bool usable(double s, const NeighborhoodSpec& spec) {
  if (spec.weighting == Weighting::positive && !(s > 0.0)) return false;
  if (spec.min_similarity && s < *spec.min_similarity) return false;
  return true;
}

double weight_of(double s, Weighting w) { return w == Weighting::signed_sum ? s : std::abs(s); }

}  // namespace

std::string_view to_string(Weighting w) {
  switch (w) {
    case Weighting::positive: return "positive";
    case Weighting::signed_abs: return "signed-abs";
    case Weighting::signed_sum: return "signed";
  }
  return "unknown";
}

std::optional<Weighting> parse_weighting(std::string_view name) {
  if (name == "positive") return Weighting::positive;
  if (name == "signed-abs") return Weighting::signed_abs;
  if (name == "signed") return Weighting::signed_sum;
  return std::nullopt;
}

void validate(const NeighborhoodSpec& spec) {
  if (spec.max_neighbors && *spec.max_neighbors == 0)
    fail(ErrorCode::invalid_argument, "max_neighbors must be at least 1");
  if (spec.min_support == 0) fail(ErrorCode::invalid_argument, "min_support must be at least 1");
}

std::vector<Neighbor> select_neighbors(Index user, Index item, const Dataset& d,
                                       const SimilarityStore& sims, const NeighborhoodSpec& spec) {
  std::vector<Neighbor> out;
  if (user >= d.num_users() || item >= d.num_items() || item >= sims.num_items()) return out;
  const auto rated = d.user_ratings(user);
  const auto near = sims.neighbors(item);
  std::size_t x = 0;
  std::size_t y = 0;
  while (x < rated.size() && y < near.size()) {
    if (rated[x].index == near[y].index) {
      if (usable(near[y].value, spec)) out.push_back({rated[x].index, near[y].value, rated[x].value});
      ++x;
      ++y;
    } else if (rated[x].index < near[y].index) {
      ++x;
    } else {
      ++y;
    }
  }
  if (spec.max_neighbors && out.size() > *spec.max_neighbors) {
    std::stable_sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.similarity > b.similarity;
    });
    out.resize(*spec.max_neighbors);
    std::sort(out.begin(), out.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.item < b.item; });
  }
  return out;
}

std::optional<double> weighted_average(std::span<const Neighbor> neighbors, Weighting weighting) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& n : neighbors) {
    num += n.similarity * n.rating;
    den += weight_of(n.similarity, weighting);
  }
  if (neighbors.empty() || std::abs(den) < kMinWeight) return std::nullopt;
  return num / den;
}

std::optional<Prediction> predict_single(Index user, Index item, const Dataset& d,
                                         const SimilarityStore& sims,
                                         const NeighborhoodSpec& spec) {
  const auto neighbors = select_neighbors(user, item, d, sims, spec);
  if (neighbors.size() < spec.min_support) return std::nullopt;
  const auto value = weighted_average(neighbors, spec.weighting);
  if (!value) return std::nullopt;
  return Prediction{user, item, d.scale().clamp(*value), neighbors.size()};
}

std::vector<Prediction> predict_unrated(Index user, const Dataset& d, const SimilarityStore& sims,
                                        const NeighborhoodSpec& spec) {
  std::vector<Prediction> out;
  if (user >= d.num_users()) return out;
  const auto rated = d.user_ratings(user);
  const std::size_t n = std::min(d.num_items(), sims.num_items());

  std::vector<bool> is_rated(d.num_items(), false);
  for (const auto& e : rated) is_rated[e.index] = true;

  if (spec.max_neighbors) {
    for (Index i = 0; i < n; ++i) {
      if (is_rated[i]) continue;
      if (auto p = predict_single(user, i, d, sims, spec)) out.push_back(*p);
    }
    return out;
  }

  // Scatter from each rated item to its neighbours. Contributions reach every
  // target in ascending rated-item order, the same order predict_single sums
  // in, so both paths give identical values.
  std::vector<double> num(n, 0.0);
  std::vector<double> den(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (const auto& r : rated) {
    if (r.index >= n) continue;
    for (const auto& nb : sims.neighbors(r.index)) {
      if (is_rated[nb.index] || !usable(nb.value, spec)) continue;
      num[nb.index] += nb.value * r.value;
      den[nb.index] += weight_of(nb.value, spec.weighting);
      ++count[nb.index];
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (count[i] == 0 || count[i] < spec.min_support || std::abs(den[i]) < kMinWeight) continue;
    out.push_back({user, i, d.scale().clamp(num[i] / den[i]), count[i]});
  }
  return out;
}

void rank_top_n(std::vector<Prediction>& predictions, std::size_t n) {
  std::sort(predictions.begin(), predictions.end(), [](const Prediction& a, const Prediction& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.item < b.item;
  });
  if (predictions.size() > n) predictions.resize(n);
}

std::vector<Prediction> recommend_top_n(Index user, const Dataset& d, const SimilarityStore& sims,
                                        const NeighborhoodSpec& spec, std::size_t n) {
  if (n == 0) fail(ErrorCode::invalid_argument, "N must be at least 1");
  auto predictions = predict_unrated(user, d, sims, spec);
  rank_top_n(predictions, n);
  return predictions;
}

}  // namespace mccf
