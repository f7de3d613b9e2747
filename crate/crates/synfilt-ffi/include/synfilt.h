/* C interface for the synfilt library. Generated by cbindgen; do not edit. */

#ifndef SYNFILT_H
#define SYNFILT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum SynfiltStatus {
  SYNFILT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SYNFILT_STATUS_NULL_POINTER = 1,
  /**
   * Arguments were structurally valid but rejected by the library.
   */
  SYNFILT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Text input could not be parsed.
   */
  SYNFILT_STATUS_PARSE_ERROR = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  SYNFILT_STATUS_UTF8_ERROR = 4,
  /**
   * An output buffer had the wrong length.
   */
  SYNFILT_STATUS_BUFFER_LENGTH_MISMATCH = 5,
} SynfiltStatus;

/**
 * Opaque filtration handle.
 */
typedef struct SynfiltFiltration SynfiltFiltration;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * A static description of a status code. Never needs freeing.
 */
const char *synfilt_status_message(enum SynfiltStatus status);

/**
 * The library version as a static C string. Never needs freeing.
 */
const char *synfilt_version(void);

/**
 * Frees a string previously returned through an out-pointer.
 *
 * # Safety
 * `s` must be a pointer returned by this library and not yet freed;
 * null is accepted and ignored.
 */
void synfilt_string_free(char *s);

/**
 * Expands a rational "m/n" in [0, 1) into comma-separated
 * factorial-base digits, written to `out_digits`.
 *
 * # Safety
 * `rational` must be a valid NUL-terminated string and `out_digits` a
 * valid pointer; the result must be freed with `synfilt_string_free`.
 */
enum SynfiltStatus synfilt_cantor_encode(const char *rational, char **out_digits);

/**
 * Recovers the exact rational "m/n" from comma-separated digits,
 * written to `out_rational`.
 *
 * # Safety
 * Same contract as [`synfilt_cantor_encode`].
 */
enum SynfiltStatus synfilt_cantor_decode(const char *digits, char **out_rational);

/**
 * Draws `n_samples` points from the Dirichlet with the given
 * parameters, writing them row-major into `out` (`n_samples` rows of
 * `alpha_len` coordinates). `out_len` must equal
 * `n_samples * alpha_len`.
 *
 * # Safety
 * `alpha` must point to `alpha_len` doubles and `out` to `out_len`
 * writable doubles.
 */
enum SynfiltStatus synfilt_dirichlet_sample(const double *alpha,
                                            uintptr_t alpha_len,
                                            uintptr_t n_samples,
                                            uint64_t seed,
                                            double *out,
                                            uintptr_t out_len);

/**
 * Writes the analytic per-coordinate mean and variance of the
 * Dirichlet into `out_mean` and `out_variance` (each `alpha_len`
 * doubles).
 *
 * # Safety
 * All pointers must cover `alpha_len` doubles.
 */
enum SynfiltStatus synfilt_dirichlet_moments(const double *alpha,
                                             uintptr_t alpha_len,
                                             double *out_mean,
                                             double *out_variance);

/**
 * Runs the pushforward moment-matching check and writes the JSON
 * report to `out_json`.
 *
 * # Safety
 * `alpha` must point to `alpha_len` doubles; the returned string must
 * be freed with `synfilt_string_free`.
 */
enum SynfiltStatus synfilt_pushforward_report_json(const double *alpha,
                                                   uintptr_t alpha_len,
                                                   uintptr_t face,
                                                   uintptr_t n_samples,
                                                   uint64_t seed,
                                                   char **out_json);

/**
 * Creates a filtration anchored at dimension `alpha_len - 1` over the
 * given context digits; writes the handle to `out`.
 *
 * # Safety
 * `alpha` must point to `alpha_len` doubles, `digits` to `digits_len`
 * values (null allowed when `digits_len` is 0), and `out` must be
 * writable. The handle must be freed with `synfilt_filtration_free`.
 */
enum SynfiltStatus synfilt_filtration_new(const double *alpha,
                                          uintptr_t alpha_len,
                                          const uint64_t *digits,
                                          uintptr_t digits_len,
                                          struct SynfiltFiltration **out);

/**
 * Restores a filtration from its persisted JSON form.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` writable.
 */
enum SynfiltStatus synfilt_filtration_from_json(const char *json, struct SynfiltFiltration **out);

/**
 * Writes the persisted JSON form of the filtration to `out_json`.
 *
 * # Safety
 * `handle` must be a live handle from this library.
 */
enum SynfiltStatus synfilt_filtration_to_json(const struct SynfiltFiltration *handle,
                                              char **out_json);

/**
 * Writes the anchor time to `out_time`.
 *
 * # Safety
 * `handle` must be live and `out_time` writable.
 */
enum SynfiltStatus synfilt_filtration_anchor_time(const struct SynfiltFiltration *handle,
                                                  uintptr_t *out_time);

/**
 * Records one observation of `category` at the anchor time,
 * replacing the handle's state with the conjugate update.
 *
 * # Safety
 * `handle` must be live and not concurrently accessed.
 */
enum SynfiltStatus synfilt_filtration_observe(struct SynfiltFiltration *handle, uintptr_t category);

/**
 * Moves the anchor one step into the future with the given split
 * fraction in [0, 1].
 *
 * # Safety
 * `handle` must be live and not concurrently accessed.
 */
enum SynfiltStatus synfilt_filtration_advance(struct SynfiltFiltration *handle, double fraction);

/**
 * Writes the determined parameters at past time `s` into `out`
 * (`out_len` must equal `s + 1`).
 *
 * # Safety
 * `handle` must be live; `out` must cover `out_len` doubles.
 */
enum SynfiltStatus synfilt_filtration_params_at(const struct SynfiltFiltration *handle,
                                                uintptr_t s,
                                                double *out,
                                                uintptr_t out_len);

/**
 * Releases a filtration handle. Null is accepted and ignored.
 *
 * # Safety
 * `handle` must originate from this library and not be used after.
 */
void synfilt_filtration_free(struct SynfiltFiltration *handle);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SYNFILT_H */
