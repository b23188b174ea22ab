#ifndef METOCEAN_JOINT_H
#define METOCEAN_JOINT_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Input, numerical and invariant failures share their values
 * with the command-line exit codes.
 */
typedef enum MjStatus {
  MJ_OK = 0,
  MJ_ERR_NULL_POINTER = 1,
  MJ_ERR_INVALID_INPUT = 2,
  MJ_ERR_NUMERICAL = 3,
  MJ_ERR_INVARIANT = 4,
  MJ_ERR_PANIC = 5,
} MjStatus;

/**
 * Fitted conditional extremes model (opaque).
 */
typedef struct MjHtFit MjHtFit;

/**
 * Fitted semi-parametric marginal (opaque).
 */
typedef struct MjMarginal MjMarginal;

typedef struct MjHtParams {
  double alpha;
  double beta;
  double mu;
  double sigma;
  double threshold_u;
  size_t n_residuals;
} MjHtParams;

/**
 * Limit-state callback in standard normal space: `g(u[0..dim], user_data)`.
 * Failure is `g ≤ 0`.
 */
typedef double (*MjLimitStateFn)(const double *u, size_t dim, void *user_data);

typedef struct MjFormResult {
  double beta;
  double p_f;
  size_t iterations;
  bool converged;
} MjFormResult;

/**
 * Coefficients of the Weibull Hs / lognormal Tp model.
 */
typedef struct MjHaverNutzen {
  double weibull_alpha;
  double weibull_beta;
  double a1;
  double a2;
  double a3;
  double b1;
  double b2;
  double b3;
} MjHaverNutzen;

/**
 * Summary of a fitted marginal.
 */
typedef struct MjMarginalParams {
  double threshold;
  double sigma;
  double xi;
  double tail_fraction;
  double events_per_year;
  size_t n;
} MjMarginalParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *mj_version(void);

/**
 * Fit `Y | X = x ~ αx + x^β Z` to Gumbel-scale pairs with `x > threshold_u`.
 *
 * # Safety
 * `x` and `y` must be valid for `n` reads; `out` must be writable.
 */
enum MjStatus mj_ht_fit(const double *x_gumbel,
                        const double *y_gumbel,
                        size_t n,
                        double threshold_u,
                        struct MjHtFit **out);

/**
 * Release a fit handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from [`mj_ht_fit`] not yet freed.
 */
void mj_ht_free(struct MjHtFit *h);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum MjStatus mj_ht_params(const struct MjHtFit *h, struct MjHtParams *out);

/**
 * Simulate `n` Gumbel-scale pairs with `x > x_min_gumbel` into `out_x`/`out_y`.
 *
 * # Safety
 * `h` must be a live handle; `out_x` and `out_y` must be valid for `n` writes.
 */
enum MjStatus mj_ht_simulate(const struct MjHtFit *h,
                             size_t n,
                             double x_min_gumbel,
                             uint64_t seed,
                             double *out_x,
                             double *out_y);

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mj_last_error_message(void);

/**
 * `p_F = 1 − Φ(β)` for `β ≥ 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MjStatus mj_failure_probability(double beta, double *out);

/**
 * FORM search in standard normal space from `start` (NULL means the origin).
 * The design point is written to `out_u` (`dim` values).
 *
 * # Safety
 * `g` must be callable with `dim` readable doubles; `start` must be null or
 * valid for `dim` reads; `out_u` valid for `dim` writes; `out` writable.
 */
enum MjStatus mj_form_search(MjLimitStateFn g,
                             void *user_data,
                             size_t dim,
                             const double *start,
                             double *out_u,
                             struct MjFormResult *out);

/**
 * Inverse-FORM contour of the Hs/Tp model: `n_points` points at angles
 * `360·i/n_points` degrees written to `out_hs`/`out_tp`, and `β` to `out_beta`.
 *
 * # Safety
 * `model` readable; `out_hs`, `out_tp` valid for `n_points` writes;
 * `out_beta` null or writable.
 */
enum MjStatus mj_hn_contour(const struct MjHaverNutzen *model,
                            double return_period_years,
                            double states_per_year,
                            size_t n_points,
                            double *out_hs,
                            double *out_tp,
                            double *out_beta);

/**
 * Fit an empirical body with a GPD tail above the `threshold_quantile`
 * sample quantile. `events_per_year` is the observation rate.
 *
 * # Safety
 * `values` must be valid for `n` reads; `out` must be writable.
 */
enum MjStatus mj_marginal_fit(const double *values,
                              size_t n,
                              double threshold_quantile,
                              double events_per_year,
                              struct MjMarginal **out);

/**
 * Release a marginal handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from [`mj_marginal_fit`] not yet freed.
 */
void mj_marginal_free(struct MjMarginal *h);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum MjStatus mj_marginal_params(const struct MjMarginal *h, struct MjMarginalParams *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum MjStatus mj_marginal_to_gumbel(const struct MjMarginal *h, double x, double *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum MjStatus mj_marginal_from_gumbel(const struct MjMarginal *h, double y, double *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum MjStatus mj_marginal_return_value(const struct MjMarginal *h,
                                       double return_period_years,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METOCEAN_JOINT_H */
