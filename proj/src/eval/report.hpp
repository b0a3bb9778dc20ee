#ifndef MCCF_EVAL_REPORT_HPP
#define MCCF_EVAL_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mccf {

struct EvalReport {
  // Configuration echo.
  std::string dataset;
  std::string similarity;
  std::string weighting;
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  std::string ranks;  // "r1,r2,r3" for multi-criteria runs, empty otherwise
  std::size_t top_n = 0;
  double relevance_threshold = 0.0;

  // Rating accuracy over test pairs that received a prediction. NaN when
  // none did.
  double mae = 0.0;
  double rmse = 0.0;
  double bias = 0.0;

  // Top-N quality, averaged over test users with at least one interesting
  // item; f1 is the harmonic mean of the averages.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  double prediction_coverage = 0.0;
  double catalog_coverage = 0.0;
  std::size_t pair_count = 0;  // test pairs attempted
  std::size_t no_prediction_count = 0;

  // Multi-criteria runs only.
  std::vector<double> criterion_mae;
  double baseline_mae = 0.0;  // global training mean predictor, same pairs
};

/// key=value lines, doubles in shortest round-trip form.
std::string to_text(const EvalReport& report);

/// Column names matching to_csv_row.
std::string csv_header();
/// Metrics with 4 decimals.
std::string to_csv_row(const EvalReport& report);

}  // namespace mccf

#endif
