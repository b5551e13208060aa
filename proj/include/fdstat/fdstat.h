#ifndef FDSTAT_FDSTAT_H
#define FDSTAT_FDSTAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(FDSTAT_BUILDING_LIBRARY)
#define FDS_API __attribute__((visibility("default")))
#else
#define FDS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fds_status {
  FDS_OK = 0,
  FDS_ERR_NULL_ARGUMENT = 1,
  FDS_ERR_INPUT = 2,       /* non-finite or malformed values */
  FDS_ERR_SIZE = 3,        /* too few values, wrong arity */
  FDS_ERR_DEGENERATE = 4,  /* zero spread */
  FDS_ERR_DOMAIN = 5,      /* point outside the operation's domain */
  FDS_ERR_SINGULAR = 6,    /* closed form singular at this point */
  FDS_ERR_PARAMETER = 7,   /* invalid configuration value */
  FDS_ERR_PARSE = 8,
  FDS_ERR_IO = 9,
  FDS_ERR_INTERNAL = 10
} fds_status;

/* Message of the last failing call on this thread ("" if none). */
FDS_API const char* fds_last_error(void);
FDS_API const char* fds_status_name(fds_status status);
FDS_API const char* fds_version(void);

/* Releases strings returned through char** out-parameters. */
FDS_API void fds_string_free(char* s);
FDS_API void fds_values_free(double* values);

/* 0 = one worker per hardware thread. Results do not depend on it. */
FDS_API void fds_set_workers(unsigned workers);

/* ---- ordered samples ---- */

typedef struct fds_sample fds_sample;

FDS_API fds_status fds_sample_create(const double* values, size_t n, fds_sample** out);
FDS_API void fds_sample_destroy(fds_sample* s);
FDS_API size_t fds_sample_size(const fds_sample* s);
/* Copies the sorted values; out must hold fds_sample_size(s) entries. */
FDS_API fds_status fds_sample_sorted(const fds_sample* s, double* out);
FDS_API fds_status fds_sample_moments(const fds_sample* s, double* mean, double* sd);
FDS_API fds_status fds_sample_range(const fds_sample* s, double* out);
FDS_API fds_status fds_sample_gini(const fds_sample* s, double* out);
/* Studentized profile (x_(i) - mean) / sd; needs n >= 3 and sd > 0. */
FDS_API fds_status fds_sample_studentize(const fds_sample* s, double* out);

/* ---- base functions ---- */

typedef struct fds_basefn fds_basefn;

/* name: "range" | "gini" | "variance" | "sd" | "standard_error" */
FDS_API fds_status fds_basefn_preset(const char* name, size_t n, fds_basefn** out);
FDS_API fds_status fds_basefn_from_json(const char* json, fds_basefn** out);
FDS_API fds_status fds_basefn_to_json(const fds_basefn* u, char** json_out);
FDS_API fds_status fds_basefn_root(const fds_basefn* u, fds_basefn** out);
FDS_API void fds_basefn_destroy(fds_basefn* u);
FDS_API size_t fds_basefn_arity(const fds_basefn* u);
/* Degree of the value returned by evaluate (1 when root-normalized). */
FDS_API double fds_basefn_degree(const fds_basefn* u);
FDS_API const char* fds_basefn_label(const fds_basefn* u);
/* point must be sorted ascending with zero sum. */
FDS_API fds_status fds_basefn_evaluate(const fds_basefn* u, const double* point, size_t n, double* out);
/* Z_n = U(x_(i) - mean) for a sample of size arity. */
FDS_API fds_status fds_basefn_statistic(const fds_basefn* u, const fds_sample* s, double* out);
/* Numerical homogeneity/definiteness check; report as JSON. */
FDS_API fds_status fds_basefn_feasibility(const fds_basefn* u, size_t trials, uint64_t seed, char** json_out,
                                          int* passed);

/* ---- studentized order-statistics transform ---- */

/* t_out holds n - 2 entries. */
FDS_API fds_status fds_transform_forward(const fds_sample* s, double* t_out, double* w1, double* w2, int* has_ties);
/* t holds n - 2 entries inside the transform region; x_out holds n. */
FDS_API fds_status fds_transform_inverse(const double* t, size_t n, double w1, double w2, double* x_out);
FDS_API fds_status fds_transform_jacobian(const double* t, size_t n, double w2, double* out);
FDS_API fds_status fds_studentized_density(const double* t, size_t n, double* out);
FDS_API fds_status fds_region_contains(const double* t, size_t n, int* inside);
FDS_API fds_status fds_normalization_closed_form(size_t n, double* out);

/* ---- verification ---- */

typedef struct fds_suite_config {
  size_t n;       /* 0 = suite default */
  uint64_t seed;
  size_t corpus;  /* random samples per n in corpus checks */
  size_t trials;  /* points per pointwise check */
} fds_suite_config;

FDS_API void fds_suite_config_default(fds_suite_config* config);
/* name: "inequalities" | "transform" | "density" | "anosov" | "all".
   Writes a JSON array of reports; *all_passed is 1 iff every report passed. */
FDS_API fds_status fds_verify_suite(const char* name, const fds_suite_config* config, char** json_out,
                                    int* all_passed);

/* ---- Monte Carlo ---- */

typedef struct fds_test_config {
  size_t n_block;
  size_t permutations;
  double alpha;
  uint64_t seed;
} fds_test_config;

FDS_API void fds_test_config_default(fds_test_config* config);
/* Blocks of n_block consecutive values; u must have arity n_block. */
FDS_API fds_status fds_independence_test_data(const double* data, size_t count, const fds_basefn* u,
                                              const fds_test_config* config, char** json_out, int* reject);
/* distribution_json: {"family": "Normal"|..., "location", "scale", "df"} */
FDS_API fds_status fds_independence_test_simulated(const char* distribution_json, size_t n_blocks,
                                                   const fds_basefn* u, const fds_test_config* config,
                                                   char** json_out, int* reject);
/* u of degree 1 and arity n. */
FDS_API fds_status fds_tstar_table(const fds_basefn* u, size_t reps, const double* levels, size_t level_count,
                                   uint64_t seed, char** json_out);
FDS_API fds_status fds_interval_coverage(const fds_basefn* u, double quantile, size_t reps, uint64_t seed,
                                         double* coverage);

/* ---- input ---- */

/* One value per line, optional header. *values is released with fds_values_free. */
FDS_API fds_status fds_read_values_file(const char* path, double** values, size_t* count);

#ifdef __cplusplus
}
#endif

#endif
