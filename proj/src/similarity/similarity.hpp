#ifndef MCCF_SIMILARITY_SIMILARITY_HPP
#define MCCF_SIMILARITY_SIMILARITY_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "core/dataset.hpp"
#include "linalg/ssvd.hpp"
#include "linalg/tensor.hpp"

namespace mccf {

enum class SimilarityKind {
  pearson,
  euclidean,
  loglikelihood,
  tanimoto,
  adjusted_cosine,
  cosine,
  latent_cosine,
};

std::string_view to_string(SimilarityKind kind);
/// Accepts the enum spellings plus the CLI forms ("adjusted-cosine", "latent").
std::optional<SimilarityKind> parse_similarity_kind(std::string_view name);
/// Set-based kinds ignore rating values.
bool is_set_based(SimilarityKind kind);

enum class EuclideanMode {
  normalized,  // 1 / (1 + d / sqrt(c))
  raw,         // 1 / (1 + d)
};

struct CoRating {
  Index user;
  double rating_i;
  double rating_j;
};

/// Users who rated both items, ascending by user index.
std::vector<CoRating> co_ratings(const Dataset& d, Index i, Index j);

// Pairwise measures. std::nullopt means "no similarity".
std::optional<double> pearson(Index i, Index j, const Dataset& d);
std::optional<double> adjusted_cosine(Index i, Index j, const Dataset& d);
std::optional<double> cosine(Index i, Index j, const Dataset& d);
std::optional<double> euclidean_sim(Index i, Index j, const Dataset& d,
                                    EuclideanMode mode = EuclideanMode::normalized);
double tanimoto(Index i, Index j, const Dataset& d);
/// 1 - 1/(1 + LLR) over the 2x2 rater co-occurrence table.
double loglikelihood(Index i, Index j, const Dataset& d, std::size_t total_users);

/// G-statistic 2 * sum k ln(k N / (row col)) of a 2x2 table, 0 ln 0 = 0.
double log_likelihood_ratio(double k11, double k12, double k21, double k22);

enum class DistanceMetric { manhattan, euclidean, chebyshev };

std::optional<DistanceMetric> parse_distance_metric(std::string_view name);
double criteria_distance(std::span<const double> v, std::span<const double> w,
                         DistanceMetric metric);
/// 1 / (1 + dist); rejects negative distances.
double distance_to_similarity(double dist);

/// Rows of V_k diag(sigma): one latent vector per item.
Eigen::MatrixXd item_latent_vectors(const FactorModel& model);
/// Rows of U2 with column b scaled by the norm of the core's b-th mode-2 slice.
Eigen::MatrixXd item_latent_vectors(const TuckerModel& model);
/// Cosine of two rows; std::nullopt if either row has zero norm.
std::optional<double> latent_cosine(const Eigen::MatrixXd& item_vectors, Index i, Index j);

/// Symmetric item x item similarity map without diagonal.
class SimilarityStore {
 public:
  struct Pair {
    Index a;
    Index b;
    double value;
  };

  SimilarityStore() = default;
  /// Builds from unordered pairs (a != b, each pair once).
  SimilarityStore(std::size_t items, SimilarityKind kind, std::span<const Pair> pairs);

  std::size_t num_items() const noexcept { return rows_.size(); }
  std::size_t num_pairs() const noexcept { return pairs_; }
  SimilarityKind kind() const noexcept { return kind_; }

  std::optional<double> get(Index i, Index j) const;
  /// Neighbours of i sorted by item index.
  std::span<const Entry> neighbors(Index i) const { return rows_.at(i); }
  /// Each unordered pair once, a < b, ascending.
  std::vector<Pair> pairs() const;

 private:
  SimilarityKind kind_ = SimilarityKind::pearson;
  std::vector<std::vector<Entry>> rows_;
  std::size_t pairs_ = 0;
};

struct SimilarityOptions {
  /// 0 selects the default: 1 for set-based kinds, 2 otherwise.
  std::size_t min_co_ratings = 0;
  EuclideanMode euclidean = EuclideanMode::normalized;
  std::size_t threads = 1;
};

std::size_t effective_min_co_ratings(SimilarityKind kind, const SimilarityOptions& options);

/// All defined pairwise similarities with at least min_co_ratings co-raters.
/// Not valid for latent_cosine (use latent_similarity_matrix).
SimilarityStore item_similarity_matrix(const Dataset& d, SimilarityKind kind,
                                       const SimilarityOptions& options = {});

/// Latent cosine for every pair of items with non-zero latent vectors.
SimilarityStore latent_similarity_matrix(const Eigen::MatrixXd& item_vectors,
                                         std::size_t threads = 1);

/// Latent cosine over the rows of V diag(sigma) from a rank-`rank` SSVD of the
/// item-mean-imputed rating matrix (oversampling shrinks to fit). The factors
/// are copied to `factors` when given.
SimilarityStore latent_item_similarity(const Dataset& d, std::size_t rank, std::uint64_t seed,
                                       std::size_t threads = 1, FactorModel* factors = nullptr);

/// item_a,item_b,kind,value rows (external ids), one per unordered pair.
void write_similarity_csv(std::ostream& out, const SimilarityStore& store, const IdIndex& items);

}  // namespace mccf

#endif
