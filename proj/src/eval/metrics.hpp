#ifndef MCCF_EVAL_METRICS_HPP
#define MCCF_EVAL_METRICS_HPP

#include <cstddef>
#include <span>

#include "linalg/sparse_matrix.hpp"

namespace mccf {

struct PredictionPair {
  double p;  // predicted
  double r;  // true
};

// All three throw Error(empty_input) on an empty input.
double mae(std::span<const PredictionPair> pairs);
double rmse(std::span<const PredictionPair> pairs);
/// Mean signed error p - r.
double bias(std::span<const PredictionPair> pairs);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Harmonic mean, 0 when both are 0.
double f1_score(double precision, double recall);

/// Inputs are item sets; duplicates are ignored. Empty recommended gives
/// precision 0, empty interesting gives recall 0.
PrecisionRecall precision_recall_f1(std::span<const Index> recommended,
                                    std::span<const Index> interesting);

struct Coverage {
  double prediction = 0.0;  // made / attempted
  double catalog = 0.0;     // recommendable / catalog
};

/// Throws Error(empty_input) when nothing was attempted and
/// Error(invalid_argument) when made > attempted or recommendable > catalog.
/// An empty catalog has catalog coverage 0.
Coverage coverage(std::size_t attempted, std::size_t made, std::size_t catalog,
                  std::size_t recommendable);

}  // namespace mccf

#endif
