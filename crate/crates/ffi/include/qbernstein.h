/* C interface to the qbernstein exact q-Bernstein toolkit. */

#ifndef QBERNSTEIN_H
#define QBERNSTEIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum QbStatus {
  /**
   * Success.
   */
  QB_STATUS_OK = 0,
  /**
   * A verify run completed but at least one identity failed.
   */
  QB_STATUS_IDENTITY_FAILURE = 1,
  /**
   * An argument was outside its domain (q, X, or configuration).
   */
  QB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A required pointer argument was null.
   */
  QB_STATUS_NULL_POINTER = 3,
  /**
   * The requested value is undefined at this point (e.g. x = 1 for the
   * ratio identity).
   */
  QB_STATUS_DOMAIN_ERROR = 4,
} QbStatus;

/**
 * Opaque exact evaluation point `(q, X = q^x)`.
 */
typedef struct QbPoint QbPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the message for the most recent failure on this thread, or null.
 * The pointer stays valid until the next failing call on the same thread;
 * do not free it.
 */
const char *qb_last_error(void);

/**
 * Creates an exact evaluation point from `q = q_num/q_den` and
 * `X = x_num/x_den`, requiring `0 < q < 1` and `q <= X <= 1`.
 *
 * # Safety
 * `out` must be a valid pointer to a `QbPoint*` slot.
 */
enum QbStatus qb_point_new(int64_t q_num,
                           int64_t q_den,
                           int64_t x_num,
                           int64_t x_den,
                           struct QbPoint **out);

/**
 * Creates the reflected point `(q, q/X)` (the point for `1 - x`).
 *
 * # Safety
 * `point` must come from [`qb_point_new`] and not be freed; `out` must be
 * a valid pointer to a `QbPoint*` slot.
 */
enum QbStatus qb_point_reflect(const struct QbPoint *point, struct QbPoint **out);

/**
 * Releases a point created by [`qb_point_new`] or [`qb_point_reflect`].
 *
 * # Safety
 * `point` must be such a pointer, not yet freed; null is a no-op.
 */
void qb_point_free(struct QbPoint *point);

/**
 * Releases a string returned by any `qb_*` call.
 *
 * # Safety
 * `s` must be a string returned by this library, not yet freed; null is a
 * no-op.
 */
void qb_string_free(char *s);

/**
 * Writes `[x]_q` as a `"num/den"` string.
 *
 * # Safety
 * `point` must be a live point; `out` must be a valid `char**` slot.
 */
enum QbStatus qb_q_number(const struct QbPoint *point, char **out);

/**
 * Writes `[1-x]_q` as a `"num/den"` string.
 *
 * # Safety
 * Same contract as [`qb_q_number`].
 */
enum QbStatus qb_q_complement(const struct QbPoint *point, char **out);

/**
 * Writes the exact basis value `B_{k,n}(x,q)` as a `"num/den"` string.
 *
 * # Safety
 * Same contract as [`qb_q_number`].
 */
enum QbStatus qb_basis(uint32_t k, uint32_t n, const struct QbPoint *point, char **out);

/**
 * Writes the exact basis sum `(1 + (1-q)[x]_q[1-x]_q)^n`.
 *
 * # Safety
 * Same contract as [`qb_q_number`].
 */
enum QbStatus qb_sum_basis(uint32_t n, const struct QbPoint *point, char **out);

/**
 * Writes the ratio form `((n-k+1)/k)([x]_q/[1-x]_q) B_{k-1,n}`, which
 * equals `B_{k,n}`. Fails with `DomainError` where `[1-x]_q = 0` (x = 1).
 * Requires `k >= 1`.
 *
 * # Safety
 * Same contract as [`qb_q_number`].
 */
enum QbStatus qb_ratio_identity(uint32_t k, uint32_t n, const struct QbPoint *point, char **out);

/**
 * Evaluates `B_{k,n}(x,q)` on the floating path, with `q^x = exp(x ln q)`.
 *
 * # Safety
 * `out` must be a valid `double*` slot.
 */
enum QbStatus qb_basis_f64(uint32_t k, uint32_t n, double q, double x, double *out);

/**
 * Writes the Gaussian binomial `C(n,k)_q` at `q = q_num/q_den` as a
 * `"num/den"` string. Requires `0 < q < 1`.
 *
 * # Safety
 * `out` must be a valid `char**` slot.
 */
enum QbStatus qb_gaussian_binomial(uint32_t n,
                                   uint32_t k,
                                   int64_t q_num,
                                   int64_t q_den,
                                   char **out);

/**
 * Writes the q-Stirling number `S(n,k:q)` as a `"num/den"` string.
 * Requires `0 < q < 1`.
 *
 * # Safety
 * `out` must be a valid `char**` slot.
 */
enum QbStatus qb_q_stirling(uint32_t n, uint32_t k, int64_t q_num, int64_t q_den, char **out);

/**
 * Runs the identity suites over the default grid with the given `max_n`
 * and writes the JSON report. Returns `Ok` when every identity passes and
 * `IdentityFailure` otherwise (the report is written either way).
 *
 * # Safety
 * `out_json` must be a valid `char**` slot.
 */
enum QbStatus qb_verify_json(uint32_t max_n, bool parallel, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QBERNSTEIN_H */
