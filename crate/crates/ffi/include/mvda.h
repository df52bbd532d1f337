#ifndef MVDA_H
#define MVDA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The nonzero values 1, 2 and 4 match the command-line exit codes.
 */
typedef enum MvdaStatus {
  MVDA_STATUS_OK = 0,
  /**
   * Malformed input: bad shape, non-Hermitian matrix, invalid JSON.
   */
  MVDA_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A moment or function value does not exist for these parameters.
   */
  MVDA_STATUS_DOMAIN = 2,
  /**
   * Numerical failure: not positive definite, no convergence, I/O.
   */
  MVDA_STATUS_NUMERIC = 4,
  MVDA_STATUS_NULL_POINTER = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  MVDA_STATUS_PANIC = 6,
} MvdaStatus;

/**
 * Hermitian matrix handle.
 */
typedef struct MvdaMatrix MvdaMatrix;

/**
 * Deterministic random stream handle.
 */
typedef struct MvdaStream MvdaStream;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *mvda_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void mvda_string_free(char *s);

/**
 * Builds a `p x p` Hermitian matrix from row-major real and imaginary parts.
 * `im` may be null for a real symmetric matrix.
 *
 * # Safety
 * `re` (and `im` when not null) must point to `p * p` doubles; `out` must be writable.
 */
enum MvdaStatus mvda_matrix_new(size_t p,
                                const double *re,
                                const double *im,
                                struct MvdaMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not freed already.
 */
void mvda_matrix_free(struct MvdaMatrix *m);

/**
 * Dimension of `m`, or 0 for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t mvda_matrix_dim(const struct MvdaMatrix *m);

/**
 * Entry `(i, j)` of `m`.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
enum MvdaStatus mvda_matrix_get(const struct MvdaMatrix *m,
                                size_t i,
                                size_t j,
                                double *re,
                                double *im);

/**
 * `log |det M|` for positive definite `M`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum MvdaStatus mvda_logdet(const struct MvdaMatrix *m, double *out);

/**
 * Eigenvalues of `m` in descending order, written to `out[0..p]`.
 *
 * # Safety
 * `m` must be a live handle; `out` must have room for `mvda_matrix_dim(m)` doubles.
 */
enum MvdaStatus mvda_eigvals(const struct MvdaMatrix *m, double *out);

/**
 * Principal branch of `log Gamma~_p(alpha)` for complex `alpha`.
 *
 * # Safety
 * `out_re` and `out_im` must be writable.
 */
enum MvdaStatus mvda_gamma_p_ln(size_t p,
                                double alpha_re,
                                double alpha_im,
                                double *out_re,
                                double *out_im);

/**
 * Generalized Pochhammer symbol `[a]_kappa`.
 *
 * # Safety
 * `parts` must point to `len` non-increasing values (or be null with `len == 0`);
 * `out_re` and `out_im` must be writable.
 */
enum MvdaStatus mvda_pochhammer(double a_re,
                                double a_im,
                                const uint32_t *parts,
                                size_t len,
                                double *out_re,
                                double *out_im);

/**
 * Zonal polynomial `C~_kappa(M)`.
 *
 * # Safety
 * As for [`mvda_pochhammer`]; `m` must be a live handle and `out` writable.
 */
enum MvdaStatus mvda_zonal(const uint32_t *parts,
                           size_t len,
                           const struct MvdaMatrix *m,
                           double *out);

/**
 * `1F1(a; c; M)` truncated at partition weight `max_order` or earlier once
 * `consecutive_orders` orders each add less than `rel_stop` of the sum.
 * `converged` (may be null) receives 1 when the early stop fired.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum MvdaStatus mvda_hyp1f1(double a,
                            double c,
                            const struct MvdaMatrix *m,
                            uint32_t max_order,
                            double rel_stop,
                            uint32_t consecutive_orders,
                            double *out,
                            int32_t *converged);

/**
 * Evaluates an average given as a JSON `AverageSpec` and writes the result
 * document to `out` (free with [`mvda_string_free`]). When the moment does
 * not exist the document lists the violated conditions and the status is
 * `Domain`.
 *
 * # Safety
 * `spec_json` must be a nul-terminated string; `out` must be writable.
 */
enum MvdaStatus mvda_average_json(const char *spec_json, char **out);

/**
 * Opens stream `stream` of `seed`. Returns null only on allocation failure.
 */
struct MvdaStream *mvda_stream_new(uint64_t seed, uint64_t stream);

/**
 * # Safety
 * `s` must be null or a handle from [`mvda_stream_new`] not freed already.
 */
void mvda_stream_free(struct MvdaStream *s);

/**
 * Draws a `p x p` complex matrix-variate gamma `W` with shape `alpha` and
 * unit scale, advancing `stream`.
 *
 * # Safety
 * `stream` must be a live handle; `out` must be writable.
 */
enum MvdaStatus mvda_sample_matrix_gamma(struct MvdaStream *stream,
                                         size_t p,
                                         double alpha,
                                         struct MvdaMatrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MVDA_H */
