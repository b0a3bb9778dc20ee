#ifndef MCCF_ENGINE_AGGREGATION_HPP
#define MCCF_ENGINE_AGGREGATION_HPP

#include <span>

#include <Eigen/Dense>

#include "core/dataset.hpp"
#include "core/rating_scale.hpp"

namespace mccf {

/// Overall = w0 + sum_c w_c * criterion_c.
struct AggregationWeights {
  Eigen::VectorXd w;       // size k + 1, w(0) is the intercept
  bool fallback = false;   // equal weights used because the fit was underdetermined

  int criteria() const noexcept { return static_cast<int>(w.size()) - 1; }
};

AggregationWeights equal_weights(int criteria);

/// Least squares of the overall rating on (1, criteria) over the tensor's
/// cells, from the normal equations with 1e-6 added to the Gram diagonal.
/// Fewer cells than k + 1 gives equal_weights with `fallback` set.
AggregationWeights fit_aggregation(const CriteriaTensor& train);

/// Throws Error(dimension_mismatch) when the lengths disagree.
double aggregate_overall(const AggregationWeights& weights, std::span<const double> criteria,
                         const RatingScale& scale);

}  // namespace mccf

#endif
