/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 The mosur Authors */

/* C interface to the mosur library. Objects are opaque handles released with
 * the matching *_free function; every call returns a status code and, on
 * failure, leaves a message for mosur_last_error(). Matrices are row-major. */

#ifndef MOSUR_MOSUR_H
#define MOSUR_MOSUR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MOSUR_API __declspec(dllexport)
#else
#define MOSUR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mosur_status {
  MOSUR_OK = 0,
  MOSUR_INVALID_ARGUMENT = 1,
  MOSUR_MODEL_FIT = 2,
  MOSUR_DUPLICATE_POINT = 3,
  MOSUR_IO = 4,
  MOSUR_PARSE = 5,
  MOSUR_CAPACITY = 6,
  MOSUR_ORACLE_VIOLATION = 7,
  MOSUR_INTERNAL = 8
} mosur_status;

typedef struct mosur_gp mosur_gp;
typedef struct mosur_problem mosur_problem;
typedef struct mosur_trace mosur_trace;

/* Message of the last failed call on this thread ("" if none). */
MOSUR_API const char* mosur_last_error(void);
MOSUR_API const char* mosur_status_name(mosur_status status);
MOSUR_API const char* mosur_version(void);

/* Strings returned through char** out-parameters. */
MOSUR_API void mosur_string_free(char* s);

/* P[U <= h, V <= k] for a standard bivariate normal with correlation rho. */
MOSUR_API mosur_status mosur_bvn_cdf(double h, double k, double rho, double* out);

/* Kriging model with a constant trend. x is n x d, y has n entries, ranges
 * has d entries. family: "matern32", "matern52" or "squared_exponential". */
MOSUR_API mosur_status mosur_gp_fit(const double* x, size_t n, size_t d, const double* y,
                                    const char* family, double variance, const double* ranges,
                                    mosur_gp** out);
MOSUR_API mosur_status mosur_gp_predict(const mosur_gp* gp, const double* x, double* mean,
                                        double* var);
MOSUR_API void mosur_gp_free(mosur_gp* gp);

/* Expected excursion volume after observing at x_plus. gps holds one model
 * per objective; archive is n_archive x q observed values; the integration
 * grid has `integration` Sobol points (0 = default size). */
MOSUR_API mosur_status mosur_eev(const mosur_gp* const* gps, size_t q, const double* archive,
                                 size_t n_archive, size_t integration, const double* x_plus,
                                 double* eev, double* reduction);

/* kind: "paper_1d" or "paper_6d". */
MOSUR_API mosur_status mosur_problem_generate(const char* kind, uint64_t seed,
                                              mosur_problem** out);
MOSUR_API mosur_status mosur_problem_load(const char* path, mosur_problem** out);
MOSUR_API mosur_status mosur_problem_save(const mosur_problem* problem, const char* path);
MOSUR_API mosur_status mosur_problem_shape(const mosur_problem* problem, size_t* points,
                                           size_t* dimension, size_t* objectives);
MOSUR_API void mosur_problem_free(mosur_problem* problem);

typedef struct mosur_run_options {
  int n_initial;
  int n_iterations;
  const char* strategy; /* "sur", "ei_scalarized" or "random" */
  int integration_size; /* 0 = default for the dimension */
  uint64_t seed;
  int candidates;       /* random candidate subset size, 0 = whole grid */
  int known_covariance; /* nonzero: use the problem's kernels unchanged */
  int record_timing;
} mosur_run_options;

MOSUR_API void mosur_run_options_init(mosur_run_options* options);

/* Runs the optimization loop. When the run stops early the partial trace is
 * still returned in *out together with the failure status. */
MOSUR_API mosur_status mosur_run(const mosur_problem* problem, const mosur_run_options* options,
                                 mosur_trace** out);
MOSUR_API mosur_status mosur_trace_save(const mosur_trace* trace, const char* path);
MOSUR_API mosur_status mosur_trace_load(const char* path, mosur_trace** out);
MOSUR_API mosur_status mosur_trace_size(const mosur_trace* trace, size_t* records,
                                        int* last_iteration);
/* Any output pointer may be NULL. */
MOSUR_API mosur_status mosur_trace_record(const mosur_trace* trace, size_t index, int* iteration,
                                          double* eev, double* reduction, double* ev);
MOSUR_API void mosur_trace_free(mosur_trace* trace);

/* Per-iteration hypervolume, epsilon and R2 of the trace, written as CSV. */
MOSUR_API mosur_status mosur_indicators_write(const mosur_trace* trace,
                                              const mosur_problem* problem, const char* path);

/* Monte-Carlo check of the closed forms. suite: "all", "prob" or "eev".
 * *passed is set to 1 when no group exceeds its allowed violations. The
 * report text (optional) must be released with mosur_string_free. */
MOSUR_API mosur_status mosur_oracle_check(const char* suite, long draws, uint64_t seed,
                                          int* passed, char** report);

/* Runs a benchmark configuration file. The report lists written files and
 * failed runs. */
MOSUR_API mosur_status mosur_bench(const char* config_path, const char* out_dir, char** report);

#ifdef __cplusplus
}
#endif

#endif /* MOSUR_MOSUR_H */
