#ifndef SOFICLAB_H
#define SOFICLAB_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SoficlabStatus {
  SOFICLAB_STATUS_OK = 0,
  /**
   * Null pointer, invalid UTF-8, or a violated precondition.
   */
  SOFICLAB_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The document could not be parsed or validated.
   */
  SOFICLAB_STATUS_PARSE_ERROR = 2,
  SOFICLAB_STATUS_EMPTY_SHIFT = 3,
  SOFICLAB_STATUS_RESOURCE_CAP = 4,
  /**
   * The input is outside the domain of the operation (for example a word not in the language).
   */
  SOFICLAB_STATUS_NOT_APPLICABLE = 5,
  /**
   * Two independent computations disagreed.
   */
  SOFICLAB_STATUS_INCONSISTENCY = 6,
  SOFICLAB_STATUS_PANIC = 7,
} SoficlabStatus;

typedef enum SoficlabTmfMode {
  SOFICLAB_TMF_MODE_MONOID = 0,
  SOFICLAB_TMF_MODE_PAPER_BOUND = 1,
  SOFICLAB_TMF_MODE_ORACLE = 2,
} SoficlabTmfMode;

/**
 * A stationary hidden-Markov measure with exact rational parameters.
 */
typedef struct SoficlabMeasure SoficlabMeasure;

/**
 * A presentation trimmed to its essential part.
 */
typedef struct SoficlabPresentation SoficlabPresentation;

/**
 * Resource limits; obtain defaults from [`soficlab_limits_default`].
 */
typedef struct SoficlabLimits {
  size_t max_subset_states;
  size_t max_words;
  size_t max_monoid;
} SoficlabLimits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *soficlab_version(void);

/**
 * Message of the last failing call on this thread, or an empty string. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *soficlab_last_error(void);

struct SoficlabLimits soficlab_limits_default(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void soficlab_string_free(char *s);

/**
 * Parses a presentation document (any accepted format) and trims it.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SoficlabStatus soficlab_presentation_load(const char *json, struct SoficlabPresentation **out);

/**
 * # Safety
 * `p` must be null or a handle from [`soficlab_presentation_load`] not yet freed.
 */
void soficlab_presentation_free(struct SoficlabPresentation *p);

/**
 * # Safety
 * `p` must be a live handle or null (which yields 0).
 */
size_t soficlab_presentation_num_states(const struct SoficlabPresentation *p);

/**
 * # Safety
 * `p` must be a live handle or null (which yields 0).
 */
size_t soficlab_presentation_num_symbols(const struct SoficlabPresentation *p);

/**
 * Membership of a word written as concatenated symbol names.
 *
 * # Safety
 * `p` must be a live handle, `word` a NUL-terminated string, `out` writable.
 */
enum SoficlabStatus soficlab_presentation_contains(const struct SoficlabPresentation *p,
                                                   const char *word,
                                                   bool *out);

/**
 * # Safety
 * `p` must be a live handle; `limits` may be null for defaults; `out` must be writable.
 */
enum SoficlabStatus soficlab_is_tmf(const struct SoficlabPresentation *p,
                                    enum SoficlabTmfMode mode,
                                    const struct SoficlabLimits *limits,
                                    bool *out);

/**
 * # Safety
 * `p` must be a live handle; `limits` may be null for defaults; `out` must be writable.
 */
enum SoficlabStatus soficlab_is_non_wandering(const struct SoficlabPresentation *p,
                                              const struct SoficlabLimits *limits,
                                              bool *out);

/**
 * # Safety
 * `p` must be a live handle; `limits` may be null for defaults; `out` must be writable.
 */
enum SoficlabStatus soficlab_is_tmc(const struct SoficlabPresentation *p,
                                    const struct SoficlabLimits *limits,
                                    bool *out);

/**
 * Full classification as a JSON report. An inconsistent classification is still written to
 * `out_json` and reported as `SOFICLAB_STATUS_INCONSISTENCY`.
 *
 * # Safety
 * `p` must be a live handle; `limits` may be null; `out_json` must be writable.
 */
enum SoficlabStatus soficlab_classify_json(const struct SoficlabPresentation *p,
                                           const struct SoficlabLimits *limits,
                                           char **out_json);

/**
 * Parses a measure document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SoficlabStatus soficlab_measure_load(const char *json, struct SoficlabMeasure **out);

/**
 * # Safety
 * `m` must be null or a handle from [`soficlab_measure_load`] not yet freed.
 */
void soficlab_measure_free(struct SoficlabMeasure *m);

/**
 * Probability of the cylinder `word` at `position`, as an exact `"p/q"` string.
 *
 * # Safety
 * `m` must be a live handle, `word` a NUL-terminated string, `out` writable.
 */
enum SoficlabStatus soficlab_measure_cylinder_prob(const struct SoficlabMeasure *m,
                                                   const char *word,
                                                   int64_t position,
                                                   char **out);

/**
 * MRF windows `(n, left, right)` and Markov windows `(markov_n, markov_left)` checked exactly;
 * the JSON report goes to `out_json`. A measure that is Markov but not an MRF within the
 * windows is reported as `SOFICLAB_STATUS_INCONSISTENCY`.
 *
 * # Safety
 * `m` must be a live handle; `limits` may be null; `out_json` must be writable.
 */
enum SoficlabStatus soficlab_measure_check_json(const struct SoficlabMeasure *m,
                                                size_t n,
                                                size_t left,
                                                size_t right,
                                                size_t markov_n,
                                                size_t markov_left,
                                                const struct SoficlabLimits *limits,
                                                char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOFICLAB_H */
