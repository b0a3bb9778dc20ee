#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <vector>

#include "core/error.hpp"

namespace mccf {

namespace {

void require_pairs(std::span<const PredictionPair> pairs) {
  if (pairs.empty()) fail(ErrorCode::empty_input, "no prediction pairs");
}

std::vector<Index> as_set(std::span<const Index> items) {
  std::vector<Index> out(items.begin(), items.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

double mae(std::span<const PredictionPair> pairs) {
  require_pairs(pairs);
  double acc = 0.0;
  for (const auto& x : pairs) acc += std::abs(x.p - x.r);
  return acc / static_cast<double>(pairs.size());
}

double rmse(std::span<const PredictionPair> pairs) {
  require_pairs(pairs);
  double acc = 0.0;
  for (const auto& x : pairs) acc += (x.p - x.r) * (x.p - x.r);
  return std::sqrt(acc / static_cast<double>(pairs.size()));
}

double bias(std::span<const PredictionPair> pairs) {
  require_pairs(pairs);
  double acc = 0.0;
  for (const auto& x : pairs) acc += x.p - x.r;
  return acc / static_cast<double>(pairs.size());
}

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

PrecisionRecall precision_recall_f1(std::span<const Index> recommended,
                                    std::span<const Index> interesting) {
  const auto rec = as_set(recommended);
  const auto rel = as_set(interesting);
  std::vector<Index> both;
  std::set_intersection(rec.begin(), rec.end(), rel.begin(), rel.end(), std::back_inserter(both));
  PrecisionRecall out;
  const auto hits = static_cast<double>(both.size());
  if (!rec.empty()) out.precision = hits / static_cast<double>(rec.size());
  if (!rel.empty()) out.recall = hits / static_cast<double>(rel.size());
  // Same value as f1_score(precision, recall), computed from counts.
  const auto total = static_cast<double>(rec.size() + rel.size());
  out.f1 = total > 0.0 ? 2.0 * hits / total : 0.0;
  return out;
}

Coverage coverage(std::size_t attempted, std::size_t made, std::size_t catalog,
                  std::size_t recommendable) {
  if (attempted == 0) fail(ErrorCode::empty_input, "no predictions attempted");
  if (made > attempted) fail(ErrorCode::invalid_argument, "more predictions than attempts");
  if (recommendable > catalog)
    fail(ErrorCode::invalid_argument, "recommendable items exceed the catalog");
  Coverage out;
  out.prediction = static_cast<double>(made) / static_cast<double>(attempted);
  out.catalog = catalog > 0 ? static_cast<double>(recommendable) / static_cast<double>(catalog) : 0.0;
  return out;
}

}  // namespace mccf
