#ifndef MCCF_ENGINE_MC_MODEL_HPP
#define MCCF_ENGINE_MC_MODEL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "core/dataset.hpp"
#include "engine/aggregation.hpp"
#include "engine/neighborhood.hpp"
#include "linalg/ssvd.hpp"
#include "linalg/tensor.hpp"
#include "similarity/similarity.hpp"

namespace mccf {

enum class SimSpace {
  latent,         // cosine of per-criterion latent item vectors
  reconstructed,  // configured kind on denoised values at the observed cells
};

enum class Decomposition {
  tucker,     // HOSVD of the users x items x (k+1) tensor
  per_slice,  // truncated SVD of every slice, rank ranks[1]
};

enum class CriteriaMode {
  residual,  // denoised value plus the weighted mean of neighbour residuals
  plain,     // weighted mean of neighbour ratings
};

std::optional<SimSpace> parse_sim_space(std::string_view name);
std::string_view to_string(SimSpace s);
std::optional<Decomposition> parse_decomposition(std::string_view name);
std::string_view to_string(Decomposition d);
std::optional<CriteriaMode> parse_criteria_mode(std::string_view name);
std::string_view to_string(CriteriaMode m);

struct McConfig {
  Dims3 ranks{1, 1, 1};
  /// Center every (item, slice) column over users before factoring.
  bool pca_option = false;
  SimSpace sim_space = SimSpace::latent;
  Decomposition decomposition = Decomposition::tucker;
  /// Measure used in the reconstructed space.
  SimilarityKind kind = SimilarityKind::pearson;
  SimilarityOptions similarity;
  NeighborhoodSpec neighborhood;
  CriteriaMode criteria_mode = CriteriaMode::residual;
  /// Cells without a neighbourhood prediction take the denoised value.
  /// Otherwise they have no prediction.
  bool fallback_to_denoised = true;
  std::size_t max_impute_iterations = 100;
  double impute_tolerance = 1e-8;
  /// Upper bound on users * items * (k+1).
  double memory_budget = 2e8;
  SsvdOptions ssvd;
};

struct McModel {
  McConfig config;
  RatingScale scale = RatingScale::one_to_five();
  int criteria = 0;
  IdIndex users;
  IdIndex items;
  std::optional<TuckerModel> tucker;
  std::vector<FactorModel> slice_factors;  // per_slice mode, slices 0..k
  Eigen::MatrixXd slice_means;             // items x (k+1); zero without the PCA option
  Tensor3 denoised;                        // users x items x (k+1)
  std::vector<Dataset> criteria_data;      // observed criterion c at index c-1
  std::vector<SimilarityStore> similarities;  // criterion c at index c-1
  AggregationWeights aggregation;
  std::size_t impute_iterations = 0;
};

/// Imputes missing cells with per-slice item means, then alternates
/// decomposition and re-imputation of the missing cells from the
/// reconstruction until the relative change falls under the tolerance. The
/// last reconstruction is the denoised tensor. Builds one similarity store per
/// criterion and fits the aggregation weights on the observed cells.
McModel build_mc_model(const CriteriaTensor& t, const McConfig& config);

struct CriteriaEstimate {
  std::vector<double> values;        // criterion 1..k at index c-1, clamped
  std::vector<std::size_t> support;  // 0 marks a denoised fallback
};

/// Throws Error(not_found) for indices outside the model.
CriteriaEstimate predict_criteria(const McModel& model, Index user, Index item);

/// Aggregated overall rating. std::nullopt only when fallback is disabled and
/// some criterion had no neighbourhood prediction.
std::optional<double> predict_overall(const McModel& model, Index user, Index item);

/// Top-n items without an observed cell for the user, by predicted overall
/// rating, ties to the lower item index. Unknown users get an empty list.
std::vector<Prediction> recommend_top_n(const McModel& model, Index user, std::size_t n);

/// Key=value lines: ranks, options, weights, counts.
std::string model_summary(const McModel& model);

}  // namespace mccf

#endif
