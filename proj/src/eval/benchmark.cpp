#include "eval/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "eval/metrics.hpp"

namespace mccf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Test items a user found interesting. Items unknown to the training data can
// never be recommended; they get private indices past the catalog so they
// still count towards recall.
struct UserTargets {
  Index user;
  std::vector<Index> interesting;
};

std::vector<UserTargets> group_interesting(const std::vector<std::optional<Index>>& users,
                                           const std::vector<std::optional<Index>>& items,
                                           const std::vector<double>& truth, double threshold,
                                           std::size_t catalog) {
  std::map<Index, std::vector<Index>> by_user;
  Index next_private = static_cast<Index>(catalog);
  for (std::size_t k = 0; k < users.size(); ++k) {
    if (!users[k]) continue;
    auto& list = by_user[*users[k]];
    if (truth[k] < threshold) continue;
    list.push_back(items[k] ? *items[k] : next_private++);
  }
  std::vector<UserTargets> out;
  out.reserve(by_user.size());
  for (auto& [u, list] : by_user) out.push_back({u, std::move(list)});
  return out;
}

struct TopNSummary {
  double precision = 0.0;
  double recall = 0.0;
  double catalog_coverage = 0.0;
};

template <class Recommend>
TopNSummary evaluate_top_n(const std::vector<UserTargets>& targets, std::size_t catalog,
                           std::size_t threads, Recommend&& recommend) {
  std::vector<std::vector<Prediction>> lists(targets.size());
  parallel_for(targets.size(), threads,
               [&](std::size_t k) { lists[k] = recommend(targets[k].user); });
  TopNSummary out;
  std::vector<bool> seen(catalog, false);
  std::size_t distinct = 0;
  std::size_t judged = 0;
  std::vector<Index> rec;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    rec.clear();
    for (const auto& p : lists[k]) {
      rec.push_back(p.item);
      if (!seen[p.item]) {
        seen[p.item] = true;
        ++distinct;
      }
    }
    if (targets[k].interesting.empty()) continue;
    const PrecisionRecall pr = precision_recall_f1(rec, targets[k].interesting);
    out.precision += pr.precision;
    out.recall += pr.recall;
    ++judged;
  }
  if (judged > 0) {
    out.precision /= static_cast<double>(judged);
    out.recall /= static_cast<double>(judged);
  }
  out.catalog_coverage = coverage(1, 1, catalog, distinct).catalog;
  return out;
}

void fill_accuracy(EvalReport& report, const std::vector<PredictionPair>& pairs) {
  if (pairs.empty()) {
    report.mae = report.rmse = report.bias = kNaN;
    return;
  }
  report.mae = mae(pairs);
  report.rmse = rmse(pairs);
  report.bias = bias(pairs);
}

double checked_threshold(const std::optional<double>& t, const RatingScale& scale) {
  const double v = t ? *t : default_relevance_threshold(scale);
  if (!scale.contains(v))
    fail(ErrorCode::invalid_argument, "relevance threshold outside the rating scale");
  return v;
}

template <class Record>
std::vector<Record> apply_filter(std::span<const Record> records, const DensityFilterSpec& f) {
  if (f.min_user_ratings == 0 && f.min_item_ratings == 0)
    return {records.begin(), records.end()};
  return density_filter<Record>(records, f);
}

std::string ranks_string(const Dims3& r) {
  return std::to_string(r[0]) + "," + std::to_string(r[1]) + "," + std::to_string(r[2]);
}

SimilarityStore build_similarities(const Dataset& train, const BenchmarkConfig& config) {
  SimilarityOptions opts = config.similarity;
  opts.threads = config.threads;
  if (config.kind != SimilarityKind::latent_cosine)
    return item_similarity_matrix(train, config.kind, opts);
  return latent_item_similarity(train, config.latent_rank, config.split.seed, config.threads);
}

}  // namespace

double default_relevance_threshold(const RatingScale& scale) {
  return std::ceil(scale.max_value() - (scale.max_value() - scale.min_value()) / 3.0);
}

NeighborhoodSpec benchmark_neighborhood() {
  NeighborhoodSpec spec;
  spec.weighting = Weighting::signed_sum;
  spec.min_support = 2;
  return spec;
}

EvalReport run_benchmark(std::span<const RatingRecord> records, const RatingScale& scale,
                         const BenchmarkConfig& config, const std::string& label) {
  validate(config.split);
  validate(config.neighborhood);
  if (config.top_n == 0) fail(ErrorCode::invalid_argument, "N must be at least 1");
  const double threshold = checked_threshold(config.relevance_threshold, scale);

  const auto filtered = apply_filter(records, config.filter);
  const auto [train_records, test_records] =
      split_train_test<RatingRecord>(filtered, config.split);
  const Dataset train = Dataset::from_records(train_records, scale);
  if (train.num_ratings() == 0) fail(ErrorCode::empty_input, "training split is empty");
  if (test_records.empty()) fail(ErrorCode::empty_input, "test split is empty");
  const SimilarityStore sims = build_similarities(train, config);

  const std::size_t n = test_records.size();
  std::vector<std::optional<Index>> users(n);
  std::vector<std::optional<Index>> items(n);
  std::vector<double> truth(n);
  std::vector<std::optional<double>> predicted(n);
  parallel_for(n, config.threads, [&](std::size_t k) {
    const auto& rec = test_records[k];
    users[k] = train.users().find(rec.user_id);
    items[k] = train.items().find(rec.item_id);
    truth[k] = rec.overall;
    if (users[k] && items[k])
      if (auto p = predict_single(*users[k], *items[k], train, sims, config.neighborhood))
        predicted[k] = p->value;
  });

  EvalReport report;
  report.dataset = label;
  report.similarity = std::string(to_string(config.kind));
  report.weighting = std::string(to_string(config.neighborhood.weighting));
  report.train_fraction = config.split.train_fraction;
  report.seed = config.split.seed;
  report.top_n = config.top_n;
  report.relevance_threshold = threshold;

  std::vector<PredictionPair> pairs;
  for (std::size_t k = 0; k < n; ++k)
    if (predicted[k]) pairs.push_back({*predicted[k], truth[k]});
  fill_accuracy(report, pairs);
  report.pair_count = n;
  report.no_prediction_count = n - pairs.size();
  report.prediction_coverage = coverage(n, pairs.size(), 1, 0).prediction;

  const auto targets = group_interesting(users, items, truth, threshold, train.num_items());
  const TopNSummary top = evaluate_top_n(targets, train.num_items(), config.threads, [&](Index u) {
    return recommend_top_n(u, train, sims, config.neighborhood, config.top_n);
  });
  report.precision = top.precision;
  report.recall = top.recall;
  report.f1 = f1_score(top.precision, top.recall);
  report.catalog_coverage = top.catalog_coverage;
  return report;
}

EvalReport run_benchmark(const std::filesystem::path& dataset, const BenchmarkConfig& config) {
  const auto records = read_movielens(dataset);
  return run_benchmark(records, RatingScale::one_to_five(), config, dataset.filename().string());
}

EvalReport run_mc_benchmark(std::span<const CriteriaRecord> records, int criteria,
                            const RatingScale& scale, const McBenchmarkConfig& config,
                            const std::string& label) {
  validate(config.split);
  if (config.top_n == 0) fail(ErrorCode::invalid_argument, "N must be at least 1");
  const double threshold = checked_threshold(config.relevance_threshold, scale);

  const auto filtered = apply_filter(records, config.filter);
  const auto [train_records, test_records] =
      split_train_test<CriteriaRecord>(filtered, config.split);
  const CriteriaTensor train = CriteriaTensor::from_records(train_records, criteria, scale);
  if (train.num_cells() == 0) fail(ErrorCode::empty_input, "training split is empty");
  if (test_records.empty()) fail(ErrorCode::empty_input, "test split is empty");
  const McModel model = build_mc_model(train, config.model);
  const std::size_t threads = config.model.similarity.threads;

  double global = 0.0;
  for (std::size_t cell = 0; cell < train.num_cells(); ++cell) global += train.values(cell)[0];
  global /= static_cast<double>(train.num_cells());

  const std::size_t n = test_records.size();
  const auto k = static_cast<std::size_t>(criteria);
  std::vector<std::optional<Index>> users(n);
  std::vector<std::optional<Index>> items(n);
  std::vector<double> truth(n);
  std::vector<std::optional<double>> predicted(n);
  std::vector<std::vector<double>> criteria_pred(n);
  parallel_for(n, threads, [&](std::size_t t) {
    const auto& rec = test_records[t];
    users[t] = train.users().find(rec.user_id);
    items[t] = train.items().find(rec.item_id);
    truth[t] = rec.overall;
    if (!users[t] || !items[t]) return;
    CriteriaEstimate est = predict_criteria(model, *users[t], *items[t]);
    if (!model.config.fallback_to_denoised &&
        std::find(est.support.begin(), est.support.end(), 0) != est.support.end())
      return;
    predicted[t] = aggregate_overall(model.aggregation, est.values, scale);
    criteria_pred[t] = std::move(est.values);
  });

  EvalReport report;
  report.dataset = label;
  report.similarity = std::string(to_string(config.model.sim_space == SimSpace::latent
                                                ? SimilarityKind::latent_cosine
                                                : config.model.kind));
  report.weighting = std::string(to_string(config.model.neighborhood.weighting));
  report.train_fraction = config.split.train_fraction;
  report.seed = config.split.seed;
  report.ranks = ranks_string(config.model.ranks);
  report.top_n = config.top_n;
  report.relevance_threshold = threshold;

  std::vector<PredictionPair> pairs;
  std::vector<PredictionPair> baseline;
  std::vector<std::vector<PredictionPair>> per_criterion(k);
  for (std::size_t t = 0; t < n; ++t) {
    if (!predicted[t]) continue;
    pairs.push_back({*predicted[t], truth[t]});
    baseline.push_back({global, truth[t]});
    for (std::size_t c = 0; c < k; ++c)
      per_criterion[c].push_back({criteria_pred[t][c], test_records[t].criteria[c]});
  }
  fill_accuracy(report, pairs);
  report.pair_count = n;
  report.no_prediction_count = n - pairs.size();
  report.prediction_coverage = coverage(n, pairs.size(), 1, 0).prediction;
  report.baseline_mae = pairs.empty() ? kNaN : mae(baseline);
  for (const auto& pc : per_criterion) report.criterion_mae.push_back(pc.empty() ? kNaN : mae(pc));

  if (config.evaluate_top_n) {
    const auto targets = group_interesting(users, items, truth, threshold, train.num_items());
    const TopNSummary top = evaluate_top_n(targets, train.num_items(), threads, [&](Index u) {
      return recommend_top_n(model, u, config.top_n);
    });
    report.precision = top.precision;
    report.recall = top.recall;
    report.f1 = f1_score(top.precision, top.recall);
    report.catalog_coverage = top.catalog_coverage;
  }
  return report;
}

EvalReport run_mc_benchmark(const SyntheticSpec& synthetic, const McBenchmarkConfig& config) {
  const SyntheticData data = generate_synthetic(synthetic);
  return run_mc_benchmark(data.records, synthetic.criteria, synthetic.scale, config,
                          "synthetic-" + std::to_string(synthetic.users) + "x" +
                              std::to_string(synthetic.items) + "x" +
                              std::to_string(synthetic.criteria));
}

std::vector<SweepEntry> parse_sweep_config(std::istream& in) {
  std::vector<SweepEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.empty()) continue;
    if (parts.size() != 4)
      throw ParseError(ErrorCode::parse, line_no, "expected: dataset kind fraction seed");
    const auto kind = parse_similarity_kind(parts[1]);
    if (!kind) throw ParseError(ErrorCode::parse, line_no, "unknown similarity '" + parts[1] + "'");
    SweepEntry e{parts[0], *kind, 0.0, 0};
    const auto& fr = parts[2];
    auto r1 = std::from_chars(fr.data(), fr.data() + fr.size(), e.train_fraction);
    if (r1.ec != std::errc() || r1.ptr != fr.data() + fr.size() || !(e.train_fraction > 0.0) ||
        !(e.train_fraction < 1.0))
      throw ParseError(ErrorCode::parse, line_no, "bad train fraction '" + fr + "'");
    const auto& sd = parts[3];
    auto r2 = std::from_chars(sd.data(), sd.data() + sd.size(), e.seed);
    if (r2.ec != std::errc() || r2.ptr != sd.data() + sd.size())
      throw ParseError(ErrorCode::parse, line_no, "bad seed '" + sd + "'");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mccf
