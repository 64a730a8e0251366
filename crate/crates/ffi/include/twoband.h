#ifndef TWOBAND_H
#define TWOBAND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TbStatus {
  TB_STATUS_OK = 0,
  TB_STATUS_NULL_POINTER = 1,
  TB_STATUS_INVALID_INPUT = 2,
  TB_STATUS_COMPUTATION_FAILED = 3,
  TB_STATUS_BUFFER_TOO_SMALL = 4,
  TB_STATUS_PANIC = 5,
} TbStatus;

typedef enum TbMode {
  TB_MODE_POSITIVE = 0,
  TB_MODE_NONNEGATIVE = 1,
  TB_MODE_COMPLEX = 2,
} TbMode;

/**
 * Opaque two-band matrix.
 */
typedef struct TbBandMatrix TbBandMatrix;

/**
 * Opaque structured spectrum report.
 */
typedef struct TbSpectrum TbSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a matrix of order `n` with band offsets `b` (lower) and `k`
 * (upper). `mode` is a [`TbMode`] value. `lower_re` holds `max(n - b, 0)`
 * entries and `upper_re` `max(n - k, 0)`; the imaginary arrays may be null
 * for real entries.
 *
 * # Safety
 * Every non-null array must hold the stated number of doubles; `out` must
 * be a valid pointer.
 */
enum TbStatus tb_band_matrix_new(size_t n,
                                 size_t b,
                                 size_t k,
                                 int mode,
                                 const double *lower_re,
                                 const double *lower_im,
                                 size_t lower_len,
                                 const double *upper_re,
                                 const double *upper_im,
                                 size_t upper_len,
                                 struct TbBandMatrix **out);

/**
 * Parses an explicit or generator instance from NUL-terminated JSON.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be a valid pointer.
 */
enum TbStatus tb_band_matrix_from_json(const char *json, struct TbBandMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void tb_band_matrix_free(struct TbBandMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `n` must be a valid pointer.
 */
enum TbStatus tb_band_matrix_order(const struct TbBandMatrix *m, size_t *n);

/**
 * Structured spectrum of `m`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be a valid pointer.
 */
enum TbStatus tb_analyze(const struct TbBandMatrix *m, struct TbSpectrum **out);

/**
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void tb_spectrum_free(struct TbSpectrum *s);

/**
 * Period `p`, gcd `g` and zero multiplicity of a spectrum. Any out pointer
 * may be null.
 *
 * # Safety
 * `s` must be a live handle; non-null out pointers must be valid.
 */
enum TbStatus tb_spectrum_counts(const struct TbSpectrum *s,
                                 size_t *p,
                                 size_t *g,
                                 size_t *zero_multiplicity);

/**
 * Copies the `n` eigenvalues into `re` and `im` (each of capacity `cap`).
 * `len` receives `n` even when the buffers are too small.
 *
 * # Safety
 * `s` must be a live handle; `re` and `im` must hold `cap` doubles; `len`
 * must be a valid pointer.
 */
enum TbStatus tb_spectrum_eigenvalues(const struct TbSpectrum *s,
                                      double *re,
                                      double *im,
                                      size_t cap,
                                      size_t *len);

/**
 * Copies the radii of ray `j` (descending) into `out`. `len` receives the
 * count even when `out` is too small.
 *
 * # Safety
 * `s` must be a live handle; `out` must hold `cap` doubles; `len` must be
 * a valid pointer.
 */
enum TbStatus tb_spectrum_radii(const struct TbSpectrum *s,
                                size_t j,
                                double *out,
                                size_t cap,
                                size_t *len);

/**
 * The report as a JSON string, to be released with [`tb_string_free`].
 *
 * # Safety
 * `s` must be a live handle; `out` must be a valid pointer.
 */
enum TbStatus tb_spectrum_to_json(const struct TbSpectrum *s, char **out);

/**
 * Checks the structured spectrum against the dense eigensolver. `passed`
 * receives 1 or 0; `report_json`, when non-null, receives the full report
 * (free with [`tb_string_free`]). A mismatch is not an error: the status is
 * `TB_STATUS_OK` and `passed` is 0.
 *
 * # Safety
 * `m` must be a live handle; `passed` must be valid; `report_json` must be
 * null or valid.
 */
enum TbStatus tb_verify(const struct TbBandMatrix *m,
                        double tol,
                        double zero_tol,
                        int *passed,
                        char **report_json);

/**
 * Closed-form multiplicity of the zero eigenvalue for `(n, b, k)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TbStatus tb_predicted_zero_multiplicity(size_t n, size_t b, size_t k, size_t *out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void tb_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *tb_last_error_message(void);

/**
 * Library version, a static string.
 */
const char *tb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOBAND_H */
