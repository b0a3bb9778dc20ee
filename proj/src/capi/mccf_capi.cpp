#include "mccf/mccf.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "engine/mc_model.hpp"
#include "engine/model_dump.hpp"
#include "engine/neighborhood.hpp"
#include "eval/benchmark.hpp"
#include "ingest/ingest.hpp"
#include "ingest/synthetic.hpp"
#include "similarity/similarity.hpp"

struct mccf_dataset {
  mccf::RatingScale scale = mccf::RatingScale::one_to_five();
  int criteria = 0;
  std::vector<mccf::RatingRecord> ratings;     // criteria == 0
  std::vector<mccf::CriteriaRecord> criteria_records;  // criteria > 0
};

struct mccf_report {
  mccf::EvalReport report;
  std::string text;
  std::string csv;
};

struct mccf_recommender {
  struct Single {
    mccf::Dataset data;
    mccf::SimilarityStore sims;
    std::optional<mccf::FactorModel> factors;
    mccf::NeighborhoodSpec spec;
  };
  std::variant<Single, mccf::McModel> model;
  mccf::IdIndex users;
  mccf::IdIndex items;
};

struct mccf_sweep {
  std::vector<mccf::SweepEntry> entries;
  std::vector<std::string> kinds;
};

namespace {

thread_local std::string last_error;

mccf_status to_status(mccf::ErrorCode code) { return static_cast<mccf_status>(code); }

template <class Fn>
mccf_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return MCCF_OK;
  } catch (const mccf::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MCCF_MEMORY_GUARD;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MCCF_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return MCCF_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) mccf::fail(mccf::ErrorCode::invalid_argument, what);
}

mccf::RatingScale parse_scale(const char* name) {
  const std::string s = name ? name : "1-5";
  if (s == "1-5") return mccf::RatingScale::one_to_five();
  if (s == "letter13") return mccf::RatingScale::letter13();
  mccf::fail(mccf::ErrorCode::invalid_argument, "unknown scale '" + s + "'");
}

mccf::SimilarityKind parse_kind(const char* name) {
  const auto kind = mccf::parse_similarity_kind(name ? name : "");
  if (!kind) mccf::fail(mccf::ErrorCode::invalid_argument,
                        std::string("unknown similarity '") + (name ? name : "") + "'");
  return *kind;
}

mccf::Weighting parse_weighting(const char* name) {
  const auto w = mccf::parse_weighting(name ? name : "");
  if (!w) mccf::fail(mccf::ErrorCode::invalid_argument,
                     std::string("unknown weighting '") + (name ? name : "") + "'");
  return *w;
}

mccf::NeighborhoodSpec neighborhood(const char* weighting, std::size_t min_support,
                                    std::size_t max_neighbors) {
  mccf::NeighborhoodSpec spec;
  spec.weighting = parse_weighting(weighting);
  spec.min_support = min_support;
  if (max_neighbors > 0) spec.max_neighbors = max_neighbors;
  mccf::validate(spec);
  return spec;
}

mccf::McConfig mc_config(const mccf_mc_options& o) {
  mccf::McConfig cfg;
  cfg.ranks = {o.ranks[0], o.ranks[1], o.ranks[2]};
  cfg.pca_option = o.pca_option != 0;
  const auto space = mccf::parse_sim_space(o.sim_space ? o.sim_space : "");
  require(space.has_value(), "unknown sim space");
  cfg.sim_space = *space;
  cfg.kind = parse_kind(o.similarity);
  require(cfg.kind != mccf::SimilarityKind::latent_cosine || cfg.sim_space == mccf::SimSpace::latent,
          "latent similarity needs the latent sim space");
  const auto dec = mccf::parse_decomposition(o.decomposition ? o.decomposition : "");
  require(dec.has_value(), "unknown decomposition");
  cfg.decomposition = *dec;
  const auto mode = mccf::parse_criteria_mode(o.criteria_mode ? o.criteria_mode : "");
  require(mode.has_value(), "unknown criteria mode");
  cfg.criteria_mode = *mode;
  cfg.neighborhood = neighborhood(o.weighting, o.min_support, o.max_neighbors);
  cfg.fallback_to_denoised = o.fallback_to_denoised != 0;
  cfg.max_impute_iterations = o.max_impute_iterations;
  cfg.ssvd.seed = o.seed;
  cfg.similarity.threads = o.threads > 0 ? o.threads : 1;
  return cfg;
}

std::optional<double> threshold(int has, double value) {
  if (!has) return std::nullopt;
  return value;
}

mccf_dataset* new_like(const mccf_dataset& d) {
  auto out = std::make_unique<mccf_dataset>();
  out->scale = d.scale;
  out->criteria = d.criteria;
  return out.release();
}

mccf_report* new_report(mccf::EvalReport r) {
  auto out = std::make_unique<mccf_report>();
  out->text = mccf::to_text(r);
  out->csv = mccf::to_csv_row(r);
  out->report = std::move(r);
  return out.release();
}

void write_file(const char* path, const auto& writer) {
  require(path != nullptr, "path is null");
  std::ofstream out(path);
  if (!out) mccf::fail(mccf::ErrorCode::io, std::string("cannot open '") + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) mccf::fail(mccf::ErrorCode::io, std::string("write to '") + path + "' failed");
}

}  // namespace

extern "C" {

const char* mccf_version(void) { return "0.1.0"; }

const char* mccf_status_name(mccf_status status) {
  switch (status) {
    case MCCF_OK: return "ok";
    case MCCF_INVALID_ARGUMENT: return "invalid argument";
    case MCCF_PARSE: return "parse error";
    case MCCF_OUT_OF_SCALE: return "value out of scale";
    case MCCF_IO: return "i/o error";
    case MCCF_RANK: return "invalid rank";
    case MCCF_DIMENSION_MISMATCH: return "dimension mismatch";
    case MCCF_CRITERION_OUT_OF_RANGE: return "criterion out of range";
    case MCCF_UNKNOWN_GRADE: return "unknown grade";
    case MCCF_EMPTY_INPUT: return "empty input";
    case MCCF_MEMORY_GUARD: return "memory guard";
    case MCCF_NOT_FOUND: return "not found";
    case MCCF_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mccf_last_error(void) { return last_error.c_str(); }

mccf_status mccf_dataset_load_movielens(const char* path, mccf_dataset** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto d = std::make_unique<mccf_dataset>();
    d->ratings = mccf::read_movielens(path);
    *out = d.release();
  });
}

mccf_status mccf_dataset_load_multicriteria(const char* path, int criteria, const char* scale,
                                            mccf_dataset** out) {
  return guarded([&] {
    require(path && out, "null argument");
    require(criteria >= 1, "criteria must be at least 1");
    auto d = std::make_unique<mccf_dataset>();
    d->scale = parse_scale(scale);
    d->criteria = criteria;
    d->criteria_records = mccf::read_multicriteria(path, criteria, d->scale);
    *out = d.release();
  });
}

void mccf_synthetic_options_init(mccf_synthetic_options* options) {
  if (!options) return;
  const mccf::SyntheticSpec spec;
  options->users = spec.users;
  options->items = spec.items;
  options->criteria = spec.criteria;
  for (std::size_t s = 0; s < 3; ++s) options->ranks[s] = spec.ranks[s];
  options->density = spec.density;
  options->noise = spec.noise;
  options->seed = spec.seed;
  options->scale = "1-5";
}

mccf_status mccf_synthetic_options_preset(mccf_synthetic_options* options, const char* preset) {
  return guarded([&] {
    require(options && preset, "null argument");
    const auto spec = mccf::synthetic_preset(preset);
    if (!spec) mccf::fail(mccf::ErrorCode::invalid_argument,
                          std::string("unknown preset '") + preset + "'");
    options->users = spec->users;
    options->items = spec->items;
    options->criteria = spec->criteria;
    for (std::size_t s = 0; s < 3; ++s) options->ranks[s] = spec->ranks[s];
    options->density = spec->density;
    options->scale = "letter13";
  });
}

mccf_status mccf_dataset_synthetic(const mccf_synthetic_options* options, mccf_dataset** out) {
  return guarded([&] {
    require(options && out, "null argument");
    mccf::SyntheticSpec spec;
    spec.users = options->users;
    spec.items = options->items;
    spec.criteria = options->criteria;
    spec.ranks = {options->ranks[0], options->ranks[1], options->ranks[2]};
    spec.density = options->density;
    spec.noise = options->noise;
    spec.seed = options->seed;
    spec.scale = parse_scale(options->scale);
    auto d = std::make_unique<mccf_dataset>();
    d->scale = spec.scale;
    d->criteria = spec.criteria;
    d->criteria_records = mccf::generate_synthetic(spec).records;
    *out = d.release();
  });
}

void mccf_dataset_free(mccf_dataset* dataset) { delete dataset; }

mccf_status mccf_dataset_stats(const mccf_dataset* dataset, mccf_stats* out) {
  return guarded([&] {
    require(dataset && out, "null argument");
    mccf::DatasetStats s;
    if (dataset->criteria == 0) {
      s = mccf::dataset_stats(mccf::Dataset::from_records(dataset->ratings, dataset->scale));
    } else {
      const auto t = mccf::CriteriaTensor::from_records(dataset->criteria_records,
                                                        dataset->criteria, dataset->scale);
      s = mccf::dataset_stats(t.overall_slice());
    }
    *out = {s.users, s.items, s.ratings, s.density};
  });
}

int mccf_dataset_criteria(const mccf_dataset* dataset) { return dataset ? dataset->criteria : 0; }

mccf_status mccf_dataset_filter(const mccf_dataset* dataset, size_t min_user_ratings,
                                size_t min_item_ratings, mccf_dataset** out) {
  return guarded([&] {
    require(dataset && out, "null argument");
    const mccf::DensityFilterSpec spec{min_user_ratings, min_item_ratings};
    std::unique_ptr<mccf_dataset> d(new_like(*dataset));
    if (dataset->criteria == 0)
      d->ratings = mccf::density_filter<mccf::RatingRecord>(dataset->ratings, spec);
    else
      d->criteria_records =
          mccf::density_filter<mccf::CriteriaRecord>(dataset->criteria_records, spec);
    *out = d.release();
  });
}

mccf_status mccf_dataset_split(const mccf_dataset* dataset, double train_fraction, uint64_t seed,
                               mccf_dataset** train, mccf_dataset** test) {
  return guarded([&] {
    require(dataset && train && test, "null argument");
    const mccf::SplitSpec spec{train_fraction, seed};
    mccf::validate(spec);
    std::unique_ptr<mccf_dataset> a(new_like(*dataset));
    std::unique_ptr<mccf_dataset> b(new_like(*dataset));
    if (dataset->criteria == 0) {
      auto [tr, te] = mccf::split_train_test<mccf::RatingRecord>(dataset->ratings, spec);
      a->ratings = std::move(tr);
      b->ratings = std::move(te);
    } else {
      auto [tr, te] =
          mccf::split_train_test<mccf::CriteriaRecord>(dataset->criteria_records, spec);
      a->criteria_records = std::move(tr);
      b->criteria_records = std::move(te);
    }
    *train = a.release();
    *test = b.release();
  });
}

mccf_status mccf_dataset_write(const mccf_dataset* dataset, const char* path) {
  return guarded([&] {
    require(dataset != nullptr, "null dataset");
    write_file(path, [&](std::ostream& out) {
      if (dataset->criteria == 0)
        mccf::write_movielens(out, dataset->ratings);
      else
        mccf::write_multicriteria(out, dataset->criteria_records);
    });
  });
}

void mccf_cf_options_init(mccf_cf_options* options) {
  if (!options) return;
  const mccf::BenchmarkConfig cfg;
  options->similarity = "pearson";
  options->weighting = "signed";
  options->min_support = cfg.neighborhood.min_support;
  options->max_neighbors = 0;
  options->latent_rank = cfg.latent_rank;
  options->train_fraction = cfg.split.train_fraction;
  options->seed = 0;
  options->top_n = cfg.top_n;
  options->has_relevance_threshold = 0;
  options->relevance_threshold = 0.0;
  options->threads = 1;
}

mccf_status mccf_run_benchmark(const mccf_dataset* dataset, const char* label,
                               const mccf_cf_options* options, mccf_report** out) {
  return guarded([&] {
    require(dataset && options && out, "null argument");
    require(dataset->criteria == 0, "benchmark needs a single-criterion dataset");
    mccf::BenchmarkConfig cfg;
    cfg.kind = parse_kind(options->similarity);
    cfg.neighborhood =
        neighborhood(options->weighting, options->min_support, options->max_neighbors);
    cfg.latent_rank = options->latent_rank;
    cfg.split = {options->train_fraction, options->seed};
    cfg.top_n = options->top_n;
    cfg.relevance_threshold =
        threshold(options->has_relevance_threshold, options->relevance_threshold);
    cfg.threads = options->threads > 0 ? options->threads : 1;
    *out = new_report(mccf::run_benchmark(dataset->ratings, dataset->scale, cfg, label ? label : ""));
  });
}

void mccf_mc_options_init(mccf_mc_options* options) {
  if (!options) return;
  const mccf::McConfig cfg;
  const mccf::McBenchmarkConfig bench;
  options->ranks[0] = 3;
  options->ranks[1] = 3;
  options->ranks[2] = 3;
  options->pca_option = 0;
  options->sim_space = "latent";
  options->similarity = "pearson";
  options->decomposition = "tucker";
  options->criteria_mode = "residual";
  options->weighting = "positive";
  options->min_support = cfg.neighborhood.min_support;
  options->max_neighbors = 0;
  options->fallback_to_denoised = cfg.fallback_to_denoised ? 1 : 0;
  options->max_impute_iterations = cfg.max_impute_iterations;
  options->train_fraction = bench.split.train_fraction;
  options->seed = 0;
  options->top_n = bench.top_n;
  options->has_relevance_threshold = 0;
  options->relevance_threshold = 0.0;
  options->evaluate_top_n = 1;
  options->threads = 1;
}

mccf_status mccf_run_mc_benchmark(const mccf_dataset* dataset, const char* label,
                                  const mccf_mc_options* options, mccf_report** out) {
  return guarded([&] {
    require(dataset && options && out, "null argument");
    require(dataset->criteria > 0, "multi-criteria benchmark needs criteria ratings");
    mccf::McBenchmarkConfig cfg;
    cfg.model = mc_config(*options);
    cfg.split = {options->train_fraction, options->seed};
    cfg.top_n = options->top_n;
    cfg.relevance_threshold =
        threshold(options->has_relevance_threshold, options->relevance_threshold);
    cfg.evaluate_top_n = options->evaluate_top_n != 0;
    *out = new_report(mccf::run_mc_benchmark(dataset->criteria_records, dataset->criteria,
                                             dataset->scale, cfg, label ? label : ""));
  });
}

mccf_status mccf_sweep_load(const char* path, mccf_sweep** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream in(path);
    if (!in) mccf::fail(mccf::ErrorCode::io, std::string("cannot open '") + path + "'");
    auto sweep = std::make_unique<mccf_sweep>();
    sweep->entries = mccf::parse_sweep_config(in);
    for (const auto& e : sweep->entries) sweep->kinds.emplace_back(mccf::to_string(e.kind));
    *out = sweep.release();
  });
}

size_t mccf_sweep_size(const mccf_sweep* sweep) { return sweep ? sweep->entries.size() : 0; }

mccf_status mccf_sweep_entry_at(const mccf_sweep* sweep, size_t index, mccf_sweep_entry* out) {
  return guarded([&] {
    require(sweep && out, "null argument");
    if (index >= sweep->entries.size())
      mccf::fail(mccf::ErrorCode::not_found, "sweep entry out of range");
    const auto& e = sweep->entries[index];
    *out = {e.dataset.c_str(), sweep->kinds[index].c_str(), e.train_fraction, e.seed};
  });
}

void mccf_sweep_free(mccf_sweep* sweep) { delete sweep; }

const char* mccf_report_text(const mccf_report* report) {
  return report ? report->text.c_str() : "";
}

const char* mccf_report_csv_row(const mccf_report* report) {
  return report ? report->csv.c_str() : "";
}

const char* mccf_report_csv_header(void) {
  static const std::string header = mccf::csv_header();
  return header.c_str();
}

mccf_status mccf_report_metric(const mccf_report* report, const char* name, double* out) {
  return guarded([&] {
    require(report && name && out, "null argument");
    const auto& r = report->report;
    const std::string key = name;
    if (key == "mae") *out = r.mae;
    else if (key == "rmse") *out = r.rmse;
    else if (key == "bias") *out = r.bias;
    else if (key == "precision") *out = r.precision;
    else if (key == "recall") *out = r.recall;
    else if (key == "f1") *out = r.f1;
    else if (key == "prediction_coverage") *out = r.prediction_coverage;
    else if (key == "catalog_coverage") *out = r.catalog_coverage;
    else if (key == "pair_count") *out = static_cast<double>(r.pair_count);
    else if (key == "no_prediction_count") *out = static_cast<double>(r.no_prediction_count);
    else if (key == "baseline_mae") *out = r.baseline_mae;
    else mccf::fail(mccf::ErrorCode::not_found, "unknown metric '" + key + "'");
  });
}

void mccf_report_free(mccf_report* report) { delete report; }

mccf_status mccf_recommender_create(const mccf_dataset* dataset, const mccf_cf_options* options,
                                    mccf_recommender** out) {
  return guarded([&] {
    require(dataset && options && out, "null argument");
    require(dataset->criteria == 0, "use mccf_recommender_create_mc for criteria ratings");
    mccf_recommender::Single single{mccf::Dataset::from_records(dataset->ratings, dataset->scale),
                                    {}, std::nullopt,
                                    neighborhood(options->weighting, options->min_support,
                                                 options->max_neighbors)};
    const auto kind = parse_kind(options->similarity);
    const std::size_t threads = options->threads > 0 ? options->threads : 1;
    if (kind == mccf::SimilarityKind::latent_cosine) {
      mccf::FactorModel factors;
      single.sims = mccf::latent_item_similarity(single.data, options->latent_rank, options->seed,
                                                 threads, &factors);
      single.factors = std::move(factors);
    } else {
      mccf::SimilarityOptions so;
      so.threads = threads;
      single.sims = mccf::item_similarity_matrix(single.data, kind, so);
    }
    auto r = std::make_unique<mccf_recommender>();
    r->users = single.data.users();
    r->items = single.data.items();
    r->model = std::move(single);
    *out = r.release();
  });
}

mccf_status mccf_recommender_create_mc(const mccf_dataset* dataset, const mccf_mc_options* options,
                                       mccf_recommender** out) {
  return guarded([&] {
    require(dataset && options && out, "null argument");
    require(dataset->criteria > 0, "dataset has no criteria ratings");
    const auto t = mccf::CriteriaTensor::from_records(dataset->criteria_records,
                                                      dataset->criteria, dataset->scale);
    auto r = std::make_unique<mccf_recommender>();
    r->users = t.users();
    r->items = t.items();
    r->model = mccf::build_mc_model(t, mc_config(*options));
    *out = r.release();
  });
}

void mccf_recommender_free(mccf_recommender* recommender) { delete recommender; }

mccf_status mccf_recommend(const mccf_recommender* recommender, const char* user_id, size_t n,
                           mccf_recommendation* out, size_t* count) {
  return guarded([&] {
    require(recommender && user_id && count, "null argument");
    require(n >= 1, "N must be at least 1");
    require(out != nullptr, "null output buffer");
    *count = 0;
    const auto user = recommender->users.find(user_id);
    if (!user) mccf::fail(mccf::ErrorCode::not_found, std::string("unknown user '") + user_id + "'");
    std::vector<mccf::Prediction> list;
    if (const auto* s = std::get_if<mccf_recommender::Single>(&recommender->model))
      list = mccf::recommend_top_n(*user, s->data, s->sims, s->spec, n);
    else
      list = mccf::recommend_top_n(std::get<mccf::McModel>(recommender->model), *user, n);
    for (std::size_t k = 0; k < list.size(); ++k)
      out[k] = {k + 1, recommender->items.external(list[k].item).c_str(), list[k].value};
    *count = list.size();
  });
}

mccf_status mccf_predict(const mccf_recommender* recommender, const char* user_id,
                         const char* item_id, double* out) {
  return guarded([&] {
    require(recommender && user_id && item_id && out, "null argument");
    const auto user = recommender->users.find(user_id);
    const auto item = recommender->items.find(item_id);
    if (!user || !item) mccf::fail(mccf::ErrorCode::not_found, "unknown user or item");
    std::optional<double> value;
    if (const auto* s = std::get_if<mccf_recommender::Single>(&recommender->model)) {
      if (auto p = mccf::predict_single(*user, *item, s->data, s->sims, s->spec)) value = p->value;
    } else {
      value = mccf::predict_overall(std::get<mccf::McModel>(recommender->model), *user, *item);
    }
    if (!value) mccf::fail(mccf::ErrorCode::not_found, "no prediction for this pair");
    *out = *value;
  });
}

mccf_status mccf_recommender_write_model(const mccf_recommender* recommender, const char* path) {
  return guarded([&] {
    require(recommender != nullptr, "null recommender");
    mccf::ModelDump dump;
    if (const auto* s = std::get_if<mccf_recommender::Single>(&recommender->model))
      dump = mccf::dump_item_model(s->data, s->sims, s->factors ? &*s->factors : nullptr);
    else
      dump = mccf::dump_mc_model(std::get<mccf::McModel>(recommender->model));
    write_file(path, [&](std::ostream& out) { mccf::write_model_dump(out, dump); });
  });
}

mccf_status mccf_recommender_write_similarities(const mccf_recommender* recommender,
                                                const char* path) {
  return guarded([&] {
    require(recommender != nullptr, "null recommender");
    const mccf::SimilarityStore* store = nullptr;
    if (const auto* s = std::get_if<mccf_recommender::Single>(&recommender->model)) {
      store = &s->sims;
    } else {
      const auto& m = std::get<mccf::McModel>(recommender->model);
      require(!m.similarities.empty(), "model has no similarity store");
      store = &m.similarities.front();
    }
    write_file(path,
               [&](std::ostream& out) { mccf::write_similarity_csv(out, *store, recommender->items); });
  });
}

}  // extern "C"
