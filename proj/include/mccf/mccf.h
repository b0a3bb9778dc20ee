#ifndef MCCF_MCCF_H
#define MCCF_MCCF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MCCF_BUILDING_LIBRARY)
#    define MCCF_API __declspec(dllexport)
#  else
#    define MCCF_API __declspec(dllimport)
#  endif
#else
#  define MCCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mccf_status {
  MCCF_OK = 0,
  MCCF_INVALID_ARGUMENT = 1,
  MCCF_PARSE = 2,
  MCCF_OUT_OF_SCALE = 3,
  MCCF_IO = 4,
  MCCF_RANK = 5,
  MCCF_DIMENSION_MISMATCH = 6,
  MCCF_CRITERION_OUT_OF_RANGE = 7,
  MCCF_UNKNOWN_GRADE = 8,
  MCCF_EMPTY_INPUT = 9,
  MCCF_MEMORY_GUARD = 10,
  MCCF_NOT_FOUND = 11,
  MCCF_INTERNAL = 99
} mccf_status;

/* Opaque handles. Every *_free accepts NULL. */
typedef struct mccf_dataset mccf_dataset;
typedef struct mccf_report mccf_report;
typedef struct mccf_recommender mccf_recommender;

MCCF_API const char* mccf_version(void);
MCCF_API const char* mccf_status_name(mccf_status status);
/* Message of the last failed call on this thread, "" if none. */
MCCF_API const char* mccf_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

/* MovieLens u.data (tab separated, 1..5). */
MCCF_API mccf_status mccf_dataset_load_movielens(const char* path, mccf_dataset** out);
/* user,item,c1..ck,overall CSV. scale is "1-5" or "letter13". */
MCCF_API mccf_status mccf_dataset_load_multicriteria(const char* path, int criteria,
                                                     const char* scale, mccf_dataset** out);

typedef struct mccf_synthetic_options {
  size_t users;
  size_t items;
  int criteria;
  size_t ranks[3];
  double density;
  double noise;
  uint64_t seed;
  const char* scale; /* "1-5" or "letter13" */
} mccf_synthetic_options;

MCCF_API void mccf_synthetic_options_init(mccf_synthetic_options* options);
/* preset is "ym20", "ym10" or "ym5"; seed and noise are left untouched. */
MCCF_API mccf_status mccf_synthetic_options_preset(mccf_synthetic_options* options,
                                                   const char* preset);
MCCF_API mccf_status mccf_dataset_synthetic(const mccf_synthetic_options* options,
                                            mccf_dataset** out);

MCCF_API void mccf_dataset_free(mccf_dataset* dataset);

typedef struct mccf_stats {
  size_t users;
  size_t items;
  size_t ratings;
  double density;
} mccf_stats;

MCCF_API mccf_status mccf_dataset_stats(const mccf_dataset* dataset, mccf_stats* out);
/* 0 for single-criterion datasets. */
MCCF_API int mccf_dataset_criteria(const mccf_dataset* dataset);

MCCF_API mccf_status mccf_dataset_filter(const mccf_dataset* dataset, size_t min_user_ratings,
                                         size_t min_item_ratings, mccf_dataset** out);
MCCF_API mccf_status mccf_dataset_split(const mccf_dataset* dataset, double train_fraction,
                                        uint64_t seed, mccf_dataset** train,
                                        mccf_dataset** test);
/* Writes in the format the dataset was loaded from. */
MCCF_API mccf_status mccf_dataset_write(const mccf_dataset* dataset, const char* path);

/* ---- single-criterion evaluation ---------------------------------------- */

typedef struct mccf_cf_options {
  const char* similarity; /* pearson, euclidean, loglikelihood, tanimoto,
                             adjusted-cosine, cosine, latent */
  const char* weighting;  /* positive, signed-abs, signed */
  size_t min_support;     /* neighbours required for a prediction */
  size_t max_neighbors;   /* 0 = unlimited */
  size_t latent_rank;     /* latent similarity only */
  double train_fraction;
  uint64_t seed;
  size_t top_n;
  int has_relevance_threshold;
  double relevance_threshold;
  size_t threads;
} mccf_cf_options;

/* Defaults used by the benchmark: signed weighting, two neighbours. */
MCCF_API void mccf_cf_options_init(mccf_cf_options* options);

MCCF_API mccf_status mccf_run_benchmark(const mccf_dataset* dataset, const char* label,
                                        const mccf_cf_options* options, mccf_report** out);

/* ---- multi-criteria evaluation ------------------------------------------ */

typedef struct mccf_mc_options {
  size_t ranks[3];
  int pca_option;
  const char* sim_space;     /* latent, reconstructed */
  const char* similarity;    /* measure for the reconstructed space */
  const char* decomposition; /* tucker, per-slice */
  const char* criteria_mode; /* residual, plain */
  const char* weighting;
  size_t min_support;
  size_t max_neighbors;
  int fallback_to_denoised;
  size_t max_impute_iterations;
  double train_fraction;
  uint64_t seed;
  size_t top_n;
  int has_relevance_threshold;
  double relevance_threshold;
  int evaluate_top_n;
  size_t threads;
} mccf_mc_options;

MCCF_API void mccf_mc_options_init(mccf_mc_options* options);

MCCF_API mccf_status mccf_run_mc_benchmark(const mccf_dataset* dataset, const char* label,
                                           const mccf_mc_options* options, mccf_report** out);

/* ---- sweep configs ------------------------------------------------------ */

typedef struct mccf_sweep_entry {
  const char* dataset;
  const char* similarity;
  double train_fraction;
  uint64_t seed;
} mccf_sweep_entry;

typedef struct mccf_sweep mccf_sweep;

/* One experiment per line: dataset kind fraction seed. */
MCCF_API mccf_status mccf_sweep_load(const char* path, mccf_sweep** out);
MCCF_API size_t mccf_sweep_size(const mccf_sweep* sweep);
/* Strings stay valid until the sweep is freed. */
MCCF_API mccf_status mccf_sweep_entry_at(const mccf_sweep* sweep, size_t index,
                                         mccf_sweep_entry* out);
MCCF_API void mccf_sweep_free(mccf_sweep* sweep);

/* ---- reports ------------------------------------------------------------ */

/* Strings stay valid until the report is freed. */
MCCF_API const char* mccf_report_text(const mccf_report* report);
MCCF_API const char* mccf_report_csv_row(const mccf_report* report);
MCCF_API const char* mccf_report_csv_header(void);
/* name: mae, rmse, bias, precision, recall, f1, prediction_coverage,
   catalog_coverage, pair_count, no_prediction_count, baseline_mae. */
MCCF_API mccf_status mccf_report_metric(const mccf_report* report, const char* name,
                                        double* out);
MCCF_API void mccf_report_free(mccf_report* report);

/* ---- recommenders ------------------------------------------------------- */

/* Trains on the whole dataset. Single-criterion datasets use the
   neighbourhood options only. */
MCCF_API mccf_status mccf_recommender_create(const mccf_dataset* dataset,
                                             const mccf_cf_options* options,
                                             mccf_recommender** out);
MCCF_API mccf_status mccf_recommender_create_mc(const mccf_dataset* dataset,
                                                const mccf_mc_options* options,
                                                mccf_recommender** out);
MCCF_API void mccf_recommender_free(mccf_recommender* recommender);

typedef struct mccf_recommendation {
  size_t rank;         /* 1-based */
  const char* item_id; /* valid for the recommender's lifetime */
  double value;
} mccf_recommendation;

/* Fills up to n entries; *count receives the number written. Unknown users
   give MCCF_NOT_FOUND. */
MCCF_API mccf_status mccf_recommend(const mccf_recommender* recommender, const char* user_id,
                                    size_t n, mccf_recommendation* out, size_t* count);
/* MCCF_NOT_FOUND for unknown ids or when no prediction exists. */
MCCF_API mccf_status mccf_predict(const mccf_recommender* recommender, const char* user_id,
                                  const char* item_id, double* out);
/* Structured-text model dump. */
MCCF_API mccf_status mccf_recommender_write_model(const mccf_recommender* recommender,
                                                  const char* path);
/* Similarity store as item_a,item_b,kind,value rows (first criterion for
   multi-criteria models). */
MCCF_API mccf_status mccf_recommender_write_similarities(const mccf_recommender* recommender,
                                                         const char* path);

#ifdef __cplusplus
}
#endif

#endif
