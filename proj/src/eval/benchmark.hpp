#ifndef MCCF_EVAL_BENCHMARK_HPP
#define MCCF_EVAL_BENCHMARK_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "engine/mc_model.hpp"
#include "engine/neighborhood.hpp"
#include "eval/report.hpp"
#include "ingest/ingest.hpp"
#include "ingest/synthetic.hpp"
#include "similarity/similarity.hpp"

namespace mccf {

/// ceil(max - (max - min) / 3): 4 on 1..5, 9 on the 13-level scale.
double default_relevance_threshold(const RatingScale& scale);

/// Evaluator convention for the single-criterion benchmark: every defined
/// similarity takes part, weights are divided by their signed sum, and at
/// least two neighbours are required.
NeighborhoodSpec benchmark_neighborhood();

struct BenchmarkConfig {
  SimilarityKind kind = SimilarityKind::pearson;
  SplitSpec split;
  DensityFilterSpec filter;
  NeighborhoodSpec neighborhood = benchmark_neighborhood();
  SimilarityOptions similarity;
  /// Rank of the SSVD behind latent_cosine; its sketch uses the split seed.
  std::size_t latent_rank = 20;
  std::size_t top_n = 10;
  /// Unset selects default_relevance_threshold.
  std::optional<double> relevance_threshold;
  std::size_t threads = 1;
};

/// Split, similarity store on the training part, prediction of every test
/// pair and per-user top-N. Deterministic for a fixed seed.
EvalReport run_benchmark(std::span<const RatingRecord> records, const RatingScale& scale,
                         const BenchmarkConfig& config, const std::string& label = "");
/// Reads a MovieLens file; the label is the file name.
EvalReport run_benchmark(const std::filesystem::path& dataset, const BenchmarkConfig& config);

struct McBenchmarkConfig {
  McConfig model;
  SplitSpec split;
  DensityFilterSpec filter;
  std::size_t top_n = 10;
  std::optional<double> relevance_threshold;
  /// Per-user top-N lists; costs one overall prediction per unrated item.
  bool evaluate_top_n = true;
};

/// Same protocol through the multi-criteria model. Reports overall-rating
/// error, per-criterion MAE and the global-mean baseline MAE.
EvalReport run_mc_benchmark(std::span<const CriteriaRecord> records, int criteria,
                            const RatingScale& scale, const McBenchmarkConfig& config,
                            const std::string& label = "");
EvalReport run_mc_benchmark(const SyntheticSpec& synthetic, const McBenchmarkConfig& config);

struct SweepEntry {
  std::string dataset;
  SimilarityKind kind;
  double train_fraction;
  std::uint64_t seed;
};

/// One experiment per line: dataset kind fraction seed, separated by commas
/// or whitespace. Blank lines and '#' comments are skipped.
std::vector<SweepEntry> parse_sweep_config(std::istream& in);

}  // namespace mccf

#endif
