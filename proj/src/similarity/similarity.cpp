#include "similarity/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "linalg/impute.hpp"

namespace mccf {

using Eigen::MatrixXd;

namespace {

// Squared norms at or below this fraction of the raw sum of squares are
// rounding residue of centering constant values.
constexpr double kDegenerate = 1e-20;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

struct PairCounts {
  std::size_t both = 0;
  std::size_t only_i = 0;
  std::size_t only_j = 0;
};

PairCounts count_raters(std::span<const Entry> a, std::span<const Entry> b) {
  PairCounts c;
  std::size_t x = 0;
  std::size_t y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x].index == b[y].index) {
      ++c.both;
      ++x;
      ++y;
    } else if (a[x].index < b[y].index) {
      ++x;
    } else {
      ++y;
    }
  }
  c.only_i = a.size() - c.both;
  c.only_j = b.size() - c.both;
  return c;
}

template <class Visit>
void merge_co_ratings(std::span<const Entry> a, std::span<const Entry> b, Visit&& visit) {
  std::size_t x = 0;
  std::size_t y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x].index == b[y].index) {
      visit(a[x].index, a[x].value, b[y].value);
      ++x;
      ++y;
    } else if (a[x].index < b[y].index) {
      ++x;
    } else {
      ++y;
    }
  }
}

std::optional<double> pearson_of(const std::vector<CoRating>& co) {
  if (co.size() < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  double raw_x = 0.0;
  double raw_y = 0.0;
  for (const auto& c : co) {
    mx += c.rating_i;
    my += c.rating_j;
    raw_x += c.rating_i * c.rating_i;
    raw_y += c.rating_j * c.rating_j;
  }
  mx /= static_cast<double>(co.size());
  my /= static_cast<double>(co.size());
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const auto& c : co) {
    const double dx = c.rating_i - mx;
    const double dy = c.rating_j - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= kDegenerate * raw_x || syy <= kDegenerate * raw_y) return std::nullopt;
  return clamp_unit(sxy / std::sqrt(sxx * syy));
}

std::optional<double> cosine_of(double dot, double nx, double ny, double raw_x, double raw_y) {
  if (nx <= kDegenerate * raw_x || ny <= kDegenerate * raw_y || nx == 0.0 || ny == 0.0)
    return std::nullopt;
  return clamp_unit(dot / std::sqrt(nx * ny));
}

std::optional<double> adjusted_cosine_of(const std::vector<CoRating>& co, const Dataset& d) {
  double dot = 0.0;
  double nx = 0.0;
  double ny = 0.0;
  double raw_x = 0.0;
  double raw_y = 0.0;
  for (const auto& c : co) {
    const double mean = d.user_mean(c.user);
    const double dx = c.rating_i - mean;
    const double dy = c.rating_j - mean;
    dot += dx * dy;
    nx += dx * dx;
    ny += dy * dy;
    raw_x += c.rating_i * c.rating_i;
    raw_y += c.rating_j * c.rating_j;
  }
  return cosine_of(dot, nx, ny, raw_x, raw_y);
}

std::optional<double> plain_cosine_of(const std::vector<CoRating>& co) {
  double dot = 0.0;
  double nx = 0.0;
  double ny = 0.0;
  for (const auto& c : co) {
    dot += c.rating_i * c.rating_j;
    nx += c.rating_i * c.rating_i;
    ny += c.rating_j * c.rating_j;
  }
  return cosine_of(dot, nx, ny, 0.0, 0.0);
}

std::optional<double> euclidean_of(const std::vector<CoRating>& co, EuclideanMode mode) {
  if (co.empty()) return std::nullopt;
  double ss = 0.0;
  for (const auto& c : co) {
    const double diff = c.rating_i - c.rating_j;
    ss += diff * diff;
  }
  const double dist = std::sqrt(ss);
  if (mode == EuclideanMode::raw) return 1.0 / (1.0 + dist);
  return 1.0 / (1.0 + dist / std::sqrt(static_cast<double>(co.size())));
}

double tanimoto_of(const PairCounts& c) {
  const std::size_t uni = c.both + c.only_i + c.only_j;
  if (uni == 0) return 0.0;
  return static_cast<double>(c.both) / static_cast<double>(uni);
}

double loglikelihood_of(const PairCounts& c, std::size_t total_users) {
  const std::size_t uni = c.both + c.only_i + c.only_j;
  if (total_users < uni)
    fail(ErrorCode::invalid_argument, "total_users smaller than the raters' union");
  const double llr = log_likelihood_ratio(static_cast<double>(c.both),
                                          static_cast<double>(c.only_i),
                                          static_cast<double>(c.only_j),
                                          static_cast<double>(total_users - uni));
  return 1.0 - 1.0 / (1.0 + llr);
}

void check_items(const Dataset& d, Index i, Index j) {
  if (i >= d.num_items() || j >= d.num_items())
    fail(ErrorCode::not_found, "item index out of range");
}

double xlogx_term(double k, double n, double row, double col) {
  if (k <= 0.0) return 0.0;
  return k * std::log(k * n / (row * col));
}

}  // namespace

std::string_view to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::pearson: return "pearson";
    case SimilarityKind::euclidean: return "euclidean";
    case SimilarityKind::loglikelihood: return "loglikelihood";
    case SimilarityKind::tanimoto: return "tanimoto";
    case SimilarityKind::adjusted_cosine: return "adjusted_cosine";
    case SimilarityKind::cosine: return "cosine";
    case SimilarityKind::latent_cosine: return "latent_cosine";
  }
  return "unknown";
}

std::optional<SimilarityKind> parse_similarity_kind(std::string_view name) {
  if (name == "pearson") return SimilarityKind::pearson;
  if (name == "euclidean") return SimilarityKind::euclidean;
  if (name == "loglikelihood" || name == "log-likelihood") return SimilarityKind::loglikelihood;
  if (name == "tanimoto") return SimilarityKind::tanimoto;
  if (name == "adjusted_cosine" || name == "adjusted-cosine") return SimilarityKind::adjusted_cosine;
  if (name == "cosine") return SimilarityKind::cosine;
  if (name == "latent_cosine" || name == "latent") return SimilarityKind::latent_cosine;
  return std::nullopt;
}

bool is_set_based(SimilarityKind kind) {
  return kind == SimilarityKind::tanimoto || kind == SimilarityKind::loglikelihood;
}

std::vector<CoRating> co_ratings(const Dataset& d, Index i, Index j) {
  check_items(d, i, j);
  std::vector<CoRating> out;
  merge_co_ratings(d.item_ratings(i), d.item_ratings(j),
                   [&out](Index u, double ri, double rj) { out.push_back({u, ri, rj}); });
  return out;
}

std::optional<double> pearson(Index i, Index j, const Dataset& d) {
  return pearson_of(co_ratings(d, i, j));
}

std::optional<double> adjusted_cosine(Index i, Index j, const Dataset& d) {
  return adjusted_cosine_of(co_ratings(d, i, j), d);
}

std::optional<double> cosine(Index i, Index j, const Dataset& d) {
  return plain_cosine_of(co_ratings(d, i, j));
}

std::optional<double> euclidean_sim(Index i, Index j, const Dataset& d, EuclideanMode mode) {
  return euclidean_of(co_ratings(d, i, j), mode);
}

double tanimoto(Index i, Index j, const Dataset& d) {
  check_items(d, i, j);
  return tanimoto_of(count_raters(d.item_ratings(i), d.item_ratings(j)));
}

double loglikelihood(Index i, Index j, const Dataset& d, std::size_t total_users) {
  check_items(d, i, j);
  return loglikelihood_of(count_raters(d.item_ratings(i), d.item_ratings(j)), total_users);
}

double log_likelihood_ratio(double k11, double k12, double k21, double k22) {
  const double n = k11 + k12 + k21 + k22;
  if (n <= 0.0) return 0.0;
  const double row1 = k11 + k12;
  const double row2 = k21 + k22;
  const double col1 = k11 + k21;
  const double col2 = k12 + k22;
  const double sum = xlogx_term(k11, n, row1, col1) + xlogx_term(k12, n, row1, col2) +
                     xlogx_term(k21, n, row2, col1) + xlogx_term(k22, n, row2, col2);
  return std::max(0.0, 2.0 * sum);
}

std::optional<DistanceMetric> parse_distance_metric(std::string_view name) {
  if (name == "manhattan") return DistanceMetric::manhattan;
  if (name == "euclidean") return DistanceMetric::euclidean;
  if (name == "chebyshev") return DistanceMetric::chebyshev;
  return std::nullopt;
}

double criteria_distance(std::span<const double> v, std::span<const double> w,
                         DistanceMetric metric) {
  if (v.size() != w.size())
    fail(ErrorCode::dimension_mismatch, "criteria vectors differ in length");
  double acc = 0.0;
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double diff = std::abs(v[c] - w[c]);
    switch (metric) {
      case DistanceMetric::manhattan: acc += diff; break;
      case DistanceMetric::euclidean: acc += diff * diff; break;
      case DistanceMetric::chebyshev: acc = std::max(acc, diff); break;
    }
  }
  return metric == DistanceMetric::euclidean ? std::sqrt(acc) : acc;
}

double distance_to_similarity(double dist) {
  if (!(dist >= 0.0)) fail(ErrorCode::invalid_argument, "distance must be non-negative");
  return 1.0 / (1.0 + dist);
}

MatrixXd item_latent_vectors(const FactorModel& model) { return model.column_latent(); }

MatrixXd item_latent_vectors(const TuckerModel& model) {
  const MatrixXd core2 = mode_unfold(model.core, 2);
  const Eigen::VectorXd weights = core2.rowwise().norm();
  return model.factors[1] * weights.asDiagonal();
}

std::optional<double> latent_cosine(const MatrixXd& item_vectors, Index i, Index j) {
  if (i >= item_vectors.rows() || j >= item_vectors.rows())
    fail(ErrorCode::not_found, "item index out of range");
  const double ni = item_vectors.row(i).squaredNorm();
  const double nj = item_vectors.row(j).squaredNorm();
  if (ni == 0.0 || nj == 0.0) return std::nullopt;
  return clamp_unit(item_vectors.row(i).dot(item_vectors.row(j)) / std::sqrt(ni * nj));
}

SimilarityStore::SimilarityStore(std::size_t items, SimilarityKind kind,
                                 std::span<const Pair> pairs)
    : kind_(kind), rows_(items), pairs_(pairs.size()) {
  for (const auto& p : pairs) {
    if (p.a == p.b || p.a >= items || p.b >= items)
      fail(ErrorCode::invalid_argument, "similarity pair out of range or on the diagonal");
    rows_[p.a].push_back({p.b, p.value});
    rows_[p.b].push_back({p.a, p.value});
  }
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end(),
              [](const Entry& x, const Entry& y) { return x.index < y.index; });
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k].index == row[k - 1].index)
        fail(ErrorCode::invalid_argument, "duplicate similarity pair");
  }
}

std::optional<double> SimilarityStore::get(Index i, Index j) const {
  if (i >= rows_.size() || j >= rows_.size()) return std::nullopt;
  const auto& row = rows_[i];
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Entry& e, Index v) { return e.index < v; });
  if (it == row.end() || it->index != j) return std::nullopt;
  return it->value;
}

std::vector<SimilarityStore::Pair> SimilarityStore::pairs() const {
  std::vector<Pair> out;
  out.reserve(pairs_);
  for (std::size_t a = 0; a < rows_.size(); ++a)
    for (const auto& e : rows_[a])
      if (e.index > a) out.push_back({static_cast<Index>(a), e.index, e.value});
  return out;
}

std::size_t effective_min_co_ratings(SimilarityKind kind, const SimilarityOptions& options) {
  if (options.min_co_ratings > 0) return options.min_co_ratings;
  return is_set_based(kind) ? 1 : 2;
}

SimilarityStore item_similarity_matrix(const Dataset& d, SimilarityKind kind,
                                       const SimilarityOptions& options) {
  if (kind == SimilarityKind::latent_cosine)
    fail(ErrorCode::invalid_argument, "latent similarity needs item factors");
  const std::size_t n = d.num_items();
  const std::size_t min_co = effective_min_co_ratings(kind, options);
  const std::size_t total_users = d.num_users();

  std::vector<std::vector<SimilarityStore::Pair>> per_item(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    auto col_i = d.item_ratings(static_cast<Index>(i));
    std::vector<CoRating> co;
    for (std::size_t j = i + 1; j < n; ++j) {
      auto col_j = d.item_ratings(static_cast<Index>(j));
      std::optional<double> value;
      if (is_set_based(kind)) {
        const PairCounts counts = count_raters(col_i, col_j);
        if (counts.both < min_co) continue;
        value = kind == SimilarityKind::tanimoto ? tanimoto_of(counts)
                                                 : loglikelihood_of(counts, total_users);
      } else {
        co.clear();
        merge_co_ratings(col_i, col_j,
                         [&co](Index u, double ri, double rj) { co.push_back({u, ri, rj}); });
        if (co.size() < min_co) continue;
        switch (kind) {
          case SimilarityKind::pearson: value = pearson_of(co); break;
          case SimilarityKind::euclidean: value = euclidean_of(co, options.euclidean); break;
          case SimilarityKind::adjusted_cosine: value = adjusted_cosine_of(co, d); break;
          case SimilarityKind::cosine: value = plain_cosine_of(co); break;
          default: break;
        }
      }
      if (value)
        per_item[i].push_back({static_cast<Index>(i), static_cast<Index>(j), *value});
    }
  });

  std::vector<SimilarityStore::Pair> pairs;
  for (auto& chunk : per_item) pairs.insert(pairs.end(), chunk.begin(), chunk.end());
  return SimilarityStore(n, kind, pairs);
}

SimilarityStore latent_similarity_matrix(const MatrixXd& item_vectors, std::size_t threads) {
  const auto n = static_cast<std::size_t>(item_vectors.rows());
  Eigen::VectorXd norms = item_vectors.rowwise().norm();
  std::vector<std::vector<SimilarityStore::Pair>> per_item(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (norms(ii) == 0.0) return;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (norms(jj) == 0.0) continue;
      const double c = clamp_unit(item_vectors.row(ii).dot(item_vectors.row(jj)) /
                                  std::sqrt(item_vectors.row(ii).squaredNorm() *
                                            item_vectors.row(jj).squaredNorm()));
      per_item[i].push_back({static_cast<Index>(i), static_cast<Index>(j), c});
    }
  });
  std::vector<SimilarityStore::Pair> pairs;
  for (auto& chunk : per_item) pairs.insert(pairs.end(), chunk.begin(), chunk.end());
  return SimilarityStore(n, SimilarityKind::latent_cosine, pairs);
}

SimilarityStore latent_item_similarity(const Dataset& d, std::size_t rank, std::uint64_t seed,
                                       std::size_t threads, FactorModel* factors) {
  const std::size_t limit = std::min(d.num_users(), d.num_items());
  if (rank < 1 || rank > limit)
    fail(ErrorCode::rank, "latent rank " + std::to_string(rank) + " outside 1.." +
                              std::to_string(limit));
  SsvdOptions opts;
  opts.oversample = std::min(opts.oversample, limit - rank);
  opts.seed = seed;
  FactorModel model = ssvd(impute_missing(d.ratings(), ImputeStrategy::item_mean), rank, opts);
  SimilarityStore out = latent_similarity_matrix(item_latent_vectors(model), threads);
  if (factors) *factors = std::move(model);
  return out;
}

void write_similarity_csv(std::ostream& out, const SimilarityStore& store, const IdIndex& items) {
  const auto kind = to_string(store.kind());
  const auto old_precision = out.precision(17);
  for (const auto& p : store.pairs())
    out << items.external(p.a) << ',' << items.external(p.b) << ',' << kind << ',' << p.value
        << '\n';
  out.precision(old_precision);
}

}  // namespace mccf
