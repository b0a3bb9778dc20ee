#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/error.hpp"
#include "eval/benchmark.hpp"
#include "eval/metrics.hpp"
#include "eval/report.hpp"
#include "ingest/synthetic.hpp"

using namespace mccf;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mccf::Error");
  return ErrorCode::invalid_argument;
}

// Random ratings with some per-item signal, ids "u<n>"/"i<n>".
std::vector<RatingRecord> random_records(int users, int items, double density,
                                         std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution keep(density);
  std::normal_distribution<double> noise(0.0, 0.8);
  std::vector<double> quality(static_cast<std::size_t>(items));
  for (auto& q : quality) q = 3.0 + noise(gen);
  std::vector<RatingRecord> out;
  for (int u = 0; u < users; ++u)
    for (int i = 0; i < items; ++i)
      if (keep(gen)) {
        const double v = std::clamp(std::round(quality[static_cast<std::size_t>(i)] + noise(gen)), 1.0, 5.0);
        out.push_back({"u" + std::to_string(u), "i" + std::to_string(i), v, {}});
      }
  return out;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("mae and rmse examples") {
    const PredictionPair p[] = {{3, 2}, {4, 6}};
    CHECK(mae(p) == 1.5);
    CHECK(rmse(p) == doctest::Approx(std::sqrt(2.5)));
    CHECK(bias(p) == -0.5);
    const PredictionPair perfect[] = {{3, 3}, {1, 1}};
    CHECK(mae(perfect) == 0.0);
    CHECK(rmse(perfect) == 0.0);
    CHECK(code_of([] { mae({}); }) == ErrorCode::empty_input);
    CHECK(code_of([] { rmse({}); }) == ErrorCode::empty_input);
    CHECK(code_of([] { bias({}); }) == ErrorCode::empty_input);
  }

  TEST_CASE("mae never exceeds rmse and metrics ignore order") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> v(1.0, 5.0);
    for (int t = 0; t < 1000; ++t) {
      std::vector<PredictionPair> pairs(1 + static_cast<std::size_t>(t % 17));
      for (auto& p : pairs) p = {v(gen), v(gen)};
      CHECK(mae(pairs) <= rmse(pairs) + 1e-15);
      auto rev = pairs;
      std::reverse(rev.begin(), rev.end());
      CHECK(mae(rev) == doctest::Approx(mae(pairs)).epsilon(1e-14));
    }
  }

  TEST_CASE("precision, recall and f1 examples") {
    const Index rec[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const Index interesting[] = {0, 1, 2, 20, 21, 22};
    const auto pr = precision_recall_f1(rec, interesting);
    CHECK(pr.precision == doctest::Approx(0.3));
    CHECK(pr.recall == doctest::Approx(0.5));
    CHECK(pr.f1 == doctest::Approx(0.375));

    const auto same = precision_recall_f1(interesting, interesting);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.f1 == 1.0);

    CHECK(f1_score(0.5, 0.25) == doctest::Approx(1.0 / 3.0));
    CHECK(f1_score(0.0, 0.0) == 0.0);
    const auto none = precision_recall_f1({}, interesting);
    CHECK(none.precision == 0.0);
    CHECK(none.f1 == 0.0);

    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
      const double p = u(gen);
      const double r = u(gen);
      const double f = f1_score(p, r);
      CHECK(f <= 2.0 * std::min(p, r) + 1e-15);
      CHECK(f >= std::min(p, r) - 1e-15);
      CHECK(f <= std::max(p, r) + 1e-15);
    }
  }

  TEST_CASE("coverage") {
    CHECK(coverage(100, 100, 10, 10).prediction == 1.0);
    CHECK(coverage(100, 80, 10, 5).prediction == 0.8);
    CHECK(coverage(100, 80, 10, 5).catalog == 0.5);
    CHECK(coverage(1, 1, 0, 0).catalog == 0.0);
    CHECK(code_of([] { coverage(0, 0, 1, 1); }) == ErrorCode::empty_input);
    CHECK(code_of([] { coverage(1, 2, 1, 1); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("relevance threshold defaults") {
    CHECK(default_relevance_threshold(RatingScale::one_to_five()) == 4.0);
    CHECK(default_relevance_threshold(RatingScale::letter13()) == 9.0);
  }

  TEST_CASE("benchmark is deterministic and reports consistent counts") {
    const auto recs = random_records(60, 40, 0.3, 3);
    BenchmarkConfig cfg;
    cfg.kind = SimilarityKind::tanimoto;
    cfg.split = {0.8, 5};
    const EvalReport a = run_benchmark(recs, RatingScale::one_to_five(), cfg, "rand");
    const EvalReport b = run_benchmark(recs, RatingScale::one_to_five(), cfg, "rand");
    CHECK(to_text(a) == to_text(b));
    const auto [train, test] = split_train_test<RatingRecord>(recs, cfg.split);
    CHECK(a.pair_count == test.size());
    CHECK(a.no_prediction_count <= a.pair_count);
    CHECK(a.prediction_coverage ==
          doctest::Approx(1.0 - double(a.no_prediction_count) / double(a.pair_count)));
    CHECK(a.mae <= a.rmse);
    CHECK(a.mae > 0.0);
    CHECK(a.relevance_threshold == 4.0);
    CHECK(a.f1 == doctest::Approx(f1_score(a.precision, a.recall)));

    cfg.threads = 3;
    const EvalReport c = run_benchmark(recs, RatingScale::one_to_five(), cfg, "rand");
    CHECK(to_text(a) == to_text(c));
  }

  TEST_CASE("benchmark kinds and configuration errors") {
    const auto recs = random_records(40, 25, 0.4, 4);
    BenchmarkConfig cfg;
    cfg.split = {0.7, 1};
    for (auto kind : {SimilarityKind::pearson, SimilarityKind::euclidean,
                      SimilarityKind::loglikelihood, SimilarityKind::adjusted_cosine,
                      SimilarityKind::latent_cosine}) {
      cfg.kind = kind;
      cfg.latent_rank = 5;
      const EvalReport r = run_benchmark(recs, RatingScale::one_to_five(), cfg);
      CHECK(r.similarity == std::string(to_string(kind)));
      if (r.pair_count > r.no_prediction_count) CHECK(r.mae <= r.rmse);
    }
    cfg.top_n = 0;
    CHECK(code_of([&] { run_benchmark(recs, RatingScale::one_to_five(), cfg); }) ==
          ErrorCode::invalid_argument);
    cfg.top_n = 10;
    cfg.relevance_threshold = 9.0;
    CHECK(code_of([&] { run_benchmark(recs, RatingScale::one_to_five(), cfg); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { run_benchmark("/nonexistent/u.data", BenchmarkConfig{}); }) ==
          ErrorCode::io);
  }

  TEST_CASE("multi-criteria benchmark on synthetic data") {
    SyntheticSpec spec;
    spec.noise = 0.1;
    spec.seed = 2;
    McBenchmarkConfig cfg;
    cfg.model.ranks = {3, 3, 4};
    cfg.split = {0.8, 7};
    const EvalReport r = run_mc_benchmark(spec, cfg);
    CHECK(r.criterion_mae.size() == 4);
    CHECK(r.mae < r.baseline_mae);
    CHECK(r.ranks == "3,3,4");
    CHECK(r.no_prediction_count == 0);
    const EvalReport again = run_mc_benchmark(spec, cfg);
    CHECK(to_text(r) == to_text(again));
  }

  TEST_CASE("report serialisation") {
    EvalReport r;
    r.dataset = "u.data";
    r.similarity = "pearson";
    r.train_fraction = 0.7;
    r.seed = 42;
    r.mae = 0.84213;
    r.rmse = 1.0;
    const std::string text = to_text(r);
    CHECK(text.find("mae=0.84213\n") != std::string::npos);
    CHECK(text.find("seed=42\n") != std::string::npos);
    const std::string row = to_csv_row(r);
    CHECK(row.rfind("u.data,pearson,0.7000,42,,0.8421,1.0000,", 0) == 0);
    std::size_t commas_h = 0, commas_r = 0;
    for (char c : csv_header()) commas_h += c == ',';
    for (char c : row) commas_r += c == ',';
    CHECK(commas_h == commas_r);
  }

  TEST_CASE("sweep config parsing") {
    std::istringstream in("# grid\nu.data pearson 0.7 42\nu.data, tanimoto, 0.8, 1\n\n");
    const auto entries = parse_sweep_config(in);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].kind == SimilarityKind::pearson);
    CHECK(entries[1].train_fraction == 0.8);
    CHECK(entries[1].seed == 1);
    std::istringstream bad("u.data pearson 1.5 42\n");
    CHECK_THROWS_AS(parse_sweep_config(bad), ParseError);
    std::istringstream unknown("u.data jaccard 0.5 42\n");
    CHECK_THROWS_AS(parse_sweep_config(unknown), ParseError);
  }
}
