#ifndef SPHGRF_SPHGRF_H
#define SPHGRF_SPHGRF_H

/*
 * C interface of libsphgrf: isotropic Gaussian random fields on spheres.
 *
 * Conventions
 *   - Every fallible call returns sgrf_status. On failure the message is
 *     available from sgrf_last_error() on the calling thread until the next
 *     failing call on that thread.
 *   - Objects are opaque handles created by *_parse / *_load / sgrf_sample_* /
 *     sgrf_run_* and released by the matching *_free function. Passing NULL
 *     to a *_free function is a no-op.
 *   - Strings and arrays returned through out-parameters are owned by the
 *     caller and released with sgrf_string_free / sgrf_array_free.
 *   - Handles are immutable after creation and may be shared across threads.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(SGRF_BUILDING_LIBRARY)
#define SGRF_API __attribute__((visibility("default")))
#else
#define SGRF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgrf_status {
  SGRF_OK = 0,
  SGRF_ERR_DOMAIN = 1,
  SGRF_ERR_CONFIG = 2,
  SGRF_ERR_TRUNCATION = 3,
  SGRF_ERR_NOT_POSITIVE_DEFINITE = 4,
  SGRF_ERR_DIVERGENT = 5,
  SGRF_ERR_IO = 6,
  SGRF_ERR_UNSUPPORTED = 7,
  SGRF_ERR_OVERFLOW = 8,
  SGRF_ERR_NUMERICAL = 9,
  SGRF_ERR_INVALID_ARGUMENT = 10,
  SGRF_ERR_INTERNAL = 11
} sgrf_status;

typedef enum sgrf_increment_method { SGRF_INCREMENT_DIRECT = 0, SGRF_INCREMENT_STAR = 1 } sgrf_increment_method;

typedef enum sgrf_summability {
  SGRF_SUM_CONVERGES = 0,
  SGRF_SUM_DIVERGES = 1,
  SGRF_SUM_UNDECIDED = 2
} sgrf_summability;

typedef struct sgrf_model sgrf_model;
typedef struct sgrf_points sgrf_points;
typedef struct sgrf_sample sgrf_sample;
/* A primary text output (CSV or JSON) plus an optional JSON sidecar. */
typedef struct sgrf_report sgrf_report;

/* ---- library ---------------------------------------------------------- */

SGRF_API const char* sgrf_version(void);
SGRF_API const char* sgrf_status_name(sgrf_status status);
SGRF_API const char* sgrf_last_error(void);
SGRF_API void sgrf_string_free(char* s);
SGRF_API void sgrf_array_free(double* a);

/* ---- special functions ------------------------------------------------ */

/* Normalized Gegenbauer W_n^lambda(x), W_n(1) = 1. lambda = INFINITY gives x^n. */
SGRF_API sgrf_status sgrf_gegenbauer_w(double lambda, int n, double x, double* out);
/* Jacobi R_n^{(alpha, beta)}(x) = P_n(x) / P_n(1). */
SGRF_API sgrf_status sgrf_jacobi_r(int n, double alpha, double beta, double x, double* out);
/* Normalization omega_n^lambda of the probability weight. */
SGRF_API sgrf_status sgrf_omega(int n, double lambda, double* out);
/* Number of degree-ell spherical harmonics on S^d. */
SGRF_API sgrf_status sgrf_c_dim(int ell, int d, uint64_t* out);

/* ---- models ----------------------------------------------------------- */

SGRF_API sgrf_status sgrf_model_parse(const char* json_text, sgrf_model** out);
SGRF_API sgrf_status sgrf_model_load(const char* path, sgrf_model** out);
SGRF_API void sgrf_model_free(sgrf_model* model);
/* Canonical "aps-v1" JSON. */
SGRF_API sgrf_status sgrf_model_serialize(const sgrf_model* model, char** out);
SGRF_API sgrf_status sgrf_model_hash(const sgrf_model* model, uint64_t* out);
/* lambda, or INFINITY for the Hilbert sphere. */
SGRF_API sgrf_status sgrf_model_lambda(const sgrf_model* model, double* out);
/* a_n for n in [begin, begin + count). */
SGRF_API sgrf_status sgrf_model_coefficients(const sgrf_model* model, size_t begin, size_t count, double* out);
/* A_n = sum_{k >= n} a_k. */
SGRF_API sgrf_status sgrf_model_tail_sum(const sgrf_model* model, size_t n, double* out);
/* Applies (1 - Delta)^{sigma/2}; temporal data is carried over. */
SGRF_API sgrf_status sgrf_model_fractional(const sgrf_model* model, double sigma, int renormalize, sgrf_model** out);
SGRF_API sgrf_status sgrf_model_summability(const sgrf_model* model, double gamma, sgrf_summability* out);

/* ---- covariance ------------------------------------------------------- */

SGRF_API sgrf_status sgrf_schoenberg_cov(const sgrf_model* model, double cosangle, double tol, double* value,
                                         double* bound);
SGRF_API sgrf_status sgrf_incremental_variance(const sgrf_model* model, double angle, double tol,
                                               sgrf_increment_method method, double* value, double* bound);
/* Needs a model with a temporal section. */
SGRF_API sgrf_status sgrf_bp_cov(const sgrf_model* model, double cosangle, double dt, double tol, double* value,
                                 double* bound);

/* ---- points and grids ------------------------------------------------- */

/* grid:lat-lon:NxM, greatcircle:N[:d], random:N:seed[:d], or a CSV path. */
SGRF_API sgrf_status sgrf_points_parse(const char* spec, sgrf_points** out);
SGRF_API void sgrf_points_free(sgrf_points* points);
SGRF_API size_t sgrf_points_count(const sgrf_points* points);
SGRF_API int sgrf_points_dimension(const sgrf_points* points);
/* Copies the d+1 coordinates of point i into out[0..len). */
SGRF_API sgrf_status sgrf_points_coords(const sgrf_points* points, size_t i, double* out, size_t len);
/* "start:step:count" time grid. */
SGRF_API sgrf_status sgrf_times_parse(const char* spec, double** out, size_t* count);
/* Comma-separated reals. */
SGRF_API sgrf_status sgrf_list_parse(const char* text, double** out, size_t* count);

/* ---- sampling --------------------------------------------------------- */

/* L < 0 selects the head degree of a spectrum without tail. */
SGRF_API sgrf_status sgrf_sample_kl(const sgrf_model* model, int L, const sgrf_points* points, int replicates,
                                    uint64_t seed, sgrf_sample** out);
SGRF_API sgrf_status sgrf_sample_spacetime(const sgrf_model* model, int L, const sgrf_points* points,
                                           const double* times, size_t time_count, int replicates, uint64_t seed,
                                           sgrf_sample** out);
/* Dense covariance factorization with automatic jitter up to max_jitter. */
SGRF_API sgrf_status sgrf_sample_cholesky(const sgrf_model* model, const sgrf_points* points, double tol,
                                          int replicates, uint64_t seed, double max_jitter, sgrf_sample** out);
SGRF_API void sgrf_sample_free(sgrf_sample* sample);
SGRF_API sgrf_status sgrf_sample_shape(const sgrf_sample* sample, size_t* replicates, size_t* columns);
/* Row-major replicates x columns values into out[0..len). */
SGRF_API sgrf_status sgrf_sample_values(const sgrf_sample* sample, double* out, size_t len);
SGRF_API sgrf_status sgrf_sample_csv(const sgrf_sample* sample, char** out);
SGRF_API sgrf_status sgrf_sample_sidecar(const sgrf_sample* sample, const sgrf_model* model, char** out);

/* ---- batch analyses --------------------------------------------------- */

/* Covariance matrix over points (and times when given), CSV i,j,value. */
SGRF_API sgrf_status sgrf_run_covariance(const sgrf_model* model, const sgrf_points* points, const double* times,
                                         size_t time_count, double tol, sgrf_report** out);
/* I(v) against the small-angle asymptote of a power tail; CSV of ratios. */
SGRF_API sgrf_status sgrf_run_malyarenko(const sgrf_model* model, const double* v, size_t count, sgrf_report** out);
/* 1 - sum a_n cos^n v against the Hilbert-sphere asymptote. */
SGRF_API sgrf_status sgrf_run_hilbert(const sgrf_model* model, const double* v, size_t count, sgrf_report** out);
/* Jacobi difference identity residuals; with a model, also the two
 * incremental-variance evaluations at tolerance tol. */
SGRF_API sgrf_status sgrf_run_identity(const sgrf_model* model, double tol, sgrf_report** out);
/* Regularity report (JSON only). gamma > 0 adds summability and
 * integrability decisions for that exponent. */
SGRF_API sgrf_status sgrf_run_classify(const sgrf_model* model, double gamma, sgrf_report** out);
/* Transformed model document (JSON) and a summary sidecar. */
SGRF_API sgrf_status sgrf_run_fraclap(const sgrf_model* model, double sigma, sgrf_report** out);
/* Variogram Hoelder estimate from a simulated sample on great-circle points. */
SGRF_API sgrf_status sgrf_run_holder(const sgrf_model* model, const sgrf_points* points, int replicates,
                                     uint64_t seed, double tol, sgrf_report** out);

SGRF_API void sgrf_report_free(sgrf_report* report);
/* Primary text; never NULL for a valid report. */
SGRF_API const char* sgrf_report_primary(const sgrf_report* report);
/* "csv" or "json". */
SGRF_API const char* sgrf_report_format(const sgrf_report* report);
/* JSON sidecar, or NULL when the report has none. */
SGRF_API const char* sgrf_report_sidecar(const sgrf_report* report);

#ifdef __cplusplus
}
#endif

#endif /* SPHGRF_SPHGRF_H */
