#include "engine/aggregation.hpp"

#include <cmath>

#include "core/error.hpp"

namespace mccf {

namespace {
constexpr double kRidge = 1e-6;
}

AggregationWeights equal_weights(int criteria) {
  if (criteria < 1) fail(ErrorCode::invalid_argument, "need at least one criterion");
  AggregationWeights out;
  out.w = Eigen::VectorXd::Constant(criteria + 1, 1.0 / criteria);
  out.w(0) = 0.0;
  out.fallback = true;
  return out;
}

AggregationWeights fit_aggregation(const CriteriaTensor& train) {
  const int k = train.criteria();
  const auto params = static_cast<Eigen::Index>(k) + 1;
  if (train.num_cells() < static_cast<std::size_t>(params)) return equal_weights(k);

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(params, params);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(params);
  Eigen::VectorXd x(params);
  for (std::size_t cell = 0; cell < train.num_cells(); ++cell) {
    const auto v = train.values(cell);
    x(0) = 1.0;
    for (int c = 1; c <= k; ++c) x(c) = v[static_cast<std::size_t>(c)];
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
    rhs += v[0] * x;
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += kRidge;

  AggregationWeights out;
  out.w = gram.ldlt().solve(rhs);
  if (!out.w.allFinite()) return equal_weights(k);
  return out;
}

double aggregate_overall(const AggregationWeights& weights, std::span<const double> criteria,
                         const RatingScale& scale) {
  if (static_cast<Eigen::Index>(criteria.size()) + 1 != weights.w.size())
    fail(ErrorCode::dimension_mismatch, "criteria count does not match the weights");
  double value = weights.w(0);
  for (std::size_t c = 0; c < criteria.size(); ++c)
    value += weights.w(static_cast<Eigen::Index>(c) + 1) * criteria[c];
  return scale.clamp(value);
}

}  // namespace mccf
