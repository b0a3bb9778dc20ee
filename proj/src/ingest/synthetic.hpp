#ifndef MCCF_INGEST_SYNTHETIC_HPP
#define MCCF_INGEST_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "core/dataset.hpp"
#include "core/rating_scale.hpp"
#include "linalg/tensor.hpp"

namespace mccf {

/// Multi-criteria ratings drawn from an exact low-rank Tucker model in which
/// the overall rating is the mean of the criteria.
struct SyntheticSpec {
  std::size_t users = 60;
  std::size_t items = 40;
  int criteria = 4;
  /// Tucker ranks of the full users x items x (k+1) tensor; ranks[2] <= k.
  Dims3 ranks{3, 3, 4};
  /// Probability that a (user, item) cell is observed.
  double density = 0.3;
  /// Standard deviation of Gaussian noise added to every observed value
  /// before clamping.
  double noise = 0.0;
  std::uint64_t seed = 0;
  RatingScale scale = RatingScale::one_to_five();
};

struct SyntheticData {
  std::vector<CriteriaRecord> records;  // ids "u<n>" and "i<n>", n from 0
  Tensor3 truth;                        // noiseless users x items x (k+1), slice 0 overall
};

/// The truth is scaled into the middle of the rating range so that no value
/// needs clamping.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Shapes of the 20/10/5-ratings-per-user Yahoo Movies protocols on the
/// 13-level scale: "ym20", "ym10", "ym5".
std::optional<SyntheticSpec> synthetic_preset(std::string_view name);

}  // namespace mccf

#endif
