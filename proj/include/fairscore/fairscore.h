/*
 * fairscore C API.
 *
 * Every call returns an fs_status; on failure fs_last_error() holds a
 * thread-local message describing it. Objects are opaque handles released
 * with their matching *_free function. Strings returned through char** are
 * heap allocated and released with fs_string_free().
 */
#ifndef FAIRSCORE_H
#define FAIRSCORE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FAIRSCORE_BUILDING)
#    define FS_API __declspec(dllexport)
#  else
#    define FS_API __declspec(dllimport)
#  endif
#else
#  define FS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
    FS_OK = 0,
    FS_ERR_MALFORMED_ROW = 1,
    FS_ERR_SCORE_OUT_OF_RANGE = 2,
    FS_ERR_UNKNOWN_GROUP = 3,
    FS_ERR_EMPTY_INPUT = 4,
    FS_ERR_EMPTY_GROUP = 5,
    FS_ERR_EMPTY_STRATUM = 6,
    FS_ERR_UNLABELED_DATASET = 7,
    FS_ERR_SINGLE_CLASS = 8,
    FS_ERR_LENGTH_MISMATCH = 9,
    FS_ERR_THETA_OUT_OF_RANGE = 10,
    FS_ERR_SINGLE_MODE = 11,
    FS_ERR_EMPTY_GROUP_IN_PARTITION = 12,
    FS_ERR_INVALID_SPEC = 13,
    FS_ERR_MALFORMED_CURVE = 14,
    FS_ERR_INVALID_ARGUMENT = 15,
    FS_ERR_IO = 16,
    FS_ERR_INTERNAL = 99
} fs_status;

typedef enum fs_schema { FS_SCHEMA_PAIR = 0, FS_SCHEMA_RECORD = 1 } fs_schema;
typedef enum fs_group { FS_GROUP_MINORITY = 0, FS_GROUP_MAJORITY = 1 } fs_group;
typedef enum fs_metric {
    FS_METRIC_DP = 0,
    FS_METRIC_EO = 1,
    FS_METRIC_FPR_GAP = 2,
    FS_METRIC_EOD = 3
} fs_metric;
typedef enum fs_algorithm {
    FS_ALGORITHM_NONE = 0,
    FS_ALGORITHM_CALIB = 1,
    FS_ALGORITHM_CCALIB = 2
} fs_algorithm;

#define FS_LABEL_MISSING (-1)

typedef struct fs_dataset fs_dataset;
typedef struct fs_calib_model fs_calib_model;
typedef struct fs_cond_model fs_cond_model;

/* Token -> group mapping for CSV input. A NULL vocabulary, or a NULL
 * minority token, means minority token "a". With no majority tokens, every
 * other non-empty token is majority. */
typedef struct fs_vocabulary {
    const char* minority_token;
    const char* const* majority_tokens;
    size_t n_majority_tokens;
} fs_vocabulary;

typedef struct fs_meanshift_config {
    double bandwidth;
    int max_iterations;
    double convergence_tol;
    double merge_radius;
} fs_meanshift_config;

typedef struct fs_beta {
    double shape1;
    double shape2;
} fs_beta;

typedef struct fs_synth_spec {
    size_t n_minority;
    size_t n_majority;
    double pos_rate_a;
    double pos_rate_b;
    fs_beta minority_pos;
    fs_beta minority_neg;
    fs_beta majority_pos;
    fs_beta majority_neg;
    uint64_t seed;
} fs_synth_spec;

/* NULL metrics means {DP}; NULL thresholds means {0.1, 0.5, 0.95}. */
typedef struct fs_run_options {
    const fs_metric* metrics;
    size_t n_metrics;
    const double* thresholds;
    size_t n_thresholds;
    fs_algorithm algorithm;
    double sigma;
    uint64_t seed;
    int has_gamma;
    double gamma;
    fs_meanshift_config meanshift;
    int use_true_labels;
    const char* fit_name;
} fs_run_options;

FS_API const char* fs_version(void);
FS_API const char* fs_status_name(fs_status status);
FS_API const char* fs_last_error(void);
FS_API void fs_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

FS_API fs_group fs_derive_pair_group(fs_group left, fs_group right);

/* ids may be NULL (ids become p1..pn); labels may be NULL (all missing) and
 * use FS_LABEL_MISSING per entry otherwise. */
FS_API fs_status fs_dataset_create(size_t n, const char* const* ids, const double* scores,
                                   const fs_group* groups, const int* labels, fs_dataset** out);
FS_API fs_status fs_dataset_load_csv(const char* path, fs_schema schema,
                                     const fs_vocabulary* vocab, fs_dataset** out);
FS_API fs_status fs_dataset_parse_csv(const char* data, size_t len, fs_schema schema,
                                      const fs_vocabulary* vocab, fs_dataset** out);
FS_API fs_status fs_dataset_save_csv(const fs_dataset* d, const char* path,
                                     const fs_vocabulary* vocab);
FS_API fs_status fs_dataset_to_csv(const fs_dataset* d, const fs_vocabulary* vocab, char** out);
FS_API void fs_dataset_free(fs_dataset* d);

FS_API size_t fs_dataset_size(const fs_dataset* d);
FS_API size_t fs_dataset_group_count(const fs_dataset* d, fs_group group);
FS_API int fs_dataset_is_labeled(const fs_dataset* d);
/* Any output pointer may be NULL. label receives FS_LABEL_MISSING when absent. */
FS_API fs_status fs_dataset_get(const fs_dataset* d, size_t index, double* score,
                                fs_group* group, int* label);

/* ---- empirical --------------------------------------------------------- */

FS_API fs_status fs_add_jitter(const double* scores, size_t n, double sigma, uint64_t seed,
                               double* out);
FS_API fs_status fs_w1_distance(const double* x, size_t nx, const double* y, size_t ny,
                                double* out);
FS_API fs_status fs_auc(const fs_dataset* d, double* out);

/* ---- bias -------------------------------------------------------------- */

FS_API fs_status fs_score_bias(const fs_dataset* d, fs_metric metric, double* out);
FS_API fs_status fs_threshold_bias(const fs_dataset* d, fs_metric metric, double theta,
                                   double* out);
FS_API fs_status fs_risk_estimate(const double* original, size_t n_original,
                                  const double* calibrated, size_t n_calibrated, double* out);

/* ---- Calib ------------------------------------------------------------- */

FS_API fs_status fs_calib_fit(const fs_dataset* d, double sigma, uint64_t seed,
                              fs_calib_model** out);
FS_API fs_status fs_calib_calibrate(const fs_calib_model* m, double score, fs_group group,
                                    double* out);
FS_API fs_status fs_calib_calibrate_dataset(const fs_calib_model* m, const fs_dataset* d,
                                            fs_dataset** out);
FS_API fs_status fs_calib_alpha(const fs_calib_model* m, double* out);
FS_API fs_status fs_calib_to_json(const fs_calib_model* m, char** out);
FS_API fs_status fs_calib_from_json(const char* json, fs_calib_model** out);
FS_API void fs_calib_free(fs_calib_model* m);

/* ---- C-Calib ----------------------------------------------------------- */

FS_API void fs_meanshift_config_default(fs_meanshift_config* cfg);
/* cfg may be NULL for defaults. */
FS_API fs_status fs_meanshift_threshold(const double* scores, size_t n,
                                        const fs_meanshift_config* cfg, double* out);
/* gamma_override and cfg may be NULL. */
FS_API fs_status fs_cond_fit(const fs_dataset* d, double sigma, uint64_t seed,
                             const double* gamma_override, const fs_meanshift_config* cfg,
                             int use_true_labels, fs_cond_model** out);
FS_API fs_status fs_cond_calibrate(const fs_cond_model* m, double score, fs_group group,
                                   double* out);
FS_API fs_status fs_cond_calibrate_dataset(const fs_cond_model* m, const fs_dataset* d,
                                           fs_dataset** out);
FS_API fs_status fs_cond_gamma(const fs_cond_model* m, double* out);
FS_API fs_status fs_cond_to_json(const fs_cond_model* m, char** out);
FS_API fs_status fs_cond_from_json(const char* json, fs_cond_model** out);
FS_API void fs_cond_free(fs_cond_model* m);

/* ---- synthetic data ---------------------------------------------------- */

FS_API void fs_synth_spec_default(fs_synth_spec* spec);
FS_API fs_status fs_generate(const fs_synth_spec* spec, fs_dataset** out);

/* ---- pipelines --------------------------------------------------------- */

FS_API void fs_run_options_default(fs_run_options* opts);
/* When curve_dir is non-NULL the metric curves are written there as
 * <curve>_<group>_<stage>.csv. */
FS_API fs_status fs_measure(const fs_dataset* d, const fs_run_options* opts,
                            const char* curve_dir, char** report_json);
/* fit may be NULL to fit on the query set. model_json may be NULL; it
 * receives an empty string for FS_ALGORITHM_NONE. */
FS_API fs_status fs_calibrate_run(const fs_dataset* query, const fs_dataset* fit,
                                  const fs_run_options* opts, const char* curve_dir,
                                  fs_dataset** calibrated, char** report_json,
                                  char** model_json);

/* ---- curves ------------------------------------------------------------ */

/* Reads two `theta,value` curve CSVs and renders the gap plot. area may be NULL. */
FS_API fs_status fs_plot_gap_svg(const char* curve_a_path, const char* label_a,
                                 const char* curve_b_path, const char* label_b,
                                 const char* title, char** svg, double* area);

#ifdef __cplusplus
}
#endif

#endif /* FAIRSCORE_H */
