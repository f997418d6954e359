#ifndef SEQBAYES_H
#define SEQBAYES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_NULL_POINTER = 1,
  SB_STATUS_INVALID_ARGUMENT = 2,
  SB_STATUS_INVALID_SEQUENCE = 3,
  SB_STATUS_OVERFLOW = 4,
  SB_STATUS_BUFFER_TOO_SMALL = 5,
  SB_STATUS_OUT_OF_RANGE = 6,
  SB_STATUS_INTERNAL = 7,
} SbStatus;

typedef enum SbHypothesisKind {
  SB_HYPOTHESIS_KIND_ADDITIVE = 0,
  SB_HYPOTHESIS_KIND_MULTIPLICATIVE = 1,
  SB_HYPOTHESIS_KIND_COMPOUND = 2,
} SbHypothesisKind;

typedef enum SbNoiseMode {
  SB_NOISE_MODE_NONE = 0,
  SB_NOISE_MODE_PROGRESSIVE = 1,
  SB_NOISE_MODE_STATIONARY = 2,
} SbNoiseMode;

// Opaque posterior table.
typedef struct SbPosterior SbPosterior;

// A rule `factor·x + offset`. `factor` is 1 for additive rules and
// `offset` is 0 for multiplicative ones. `kind` holds an `SbHypothesisKind`.
typedef struct SbHypothesis {
  uint32_t kind;
  uint64_t factor;
  uint64_t offset;
} SbHypothesis;

// One row of a posterior table.
typedef struct SbEntry {
  struct SbHypothesis hypothesis;
  // `-INFINITY` when the prior is zero.
  double log_score;
  double probability;
  uint64_t prediction;
} SbEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread; do not free.
const char *sb_last_error(void);

// Library version as a static NUL-terminated string.
const char *sb_version(void);

// Computes the posterior over the default 32-rule space.
//
// # Safety
// `values` must point to `len` readable `u64`s; `out` must be a valid
// pointer to writable storage for one handle.
enum SbStatus sb_posterior_compute(const uint64_t *values,
                                   size_t len,
                                   double beta,
                                   double sigma2,
                                   struct SbPosterior **out);

// Number of entries; 0 for NULL.
//
// # Safety
// `handle` must be NULL or a live handle from [`sb_posterior_compute`].
size_t sb_posterior_len(const struct SbPosterior *handle);

// Entry `index` in descending probability order.
//
// # Safety
// `handle` must be NULL or a live handle; `out` must be NULL or writable.
enum SbStatus sb_posterior_entry(const struct SbPosterior *handle,
                                 size_t index,
                                 struct SbEntry *out);

// Serializes the table as JSON. Free the result with [`sb_string_free`].
// Returns NULL on failure.
//
// # Safety
// `handle` must be NULL or a live handle.
char *sb_posterior_to_json(const struct SbPosterior *handle);

// # Safety
// `handle` must be NULL or a handle from [`sb_posterior_compute`] not yet freed.
void sb_posterior_free(struct SbPosterior *handle);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void sb_string_free(char *s);

// MAP rule and its prediction for the next element.
//
// # Safety
// `values` must point to `len` readable `u64`s; `out_next` and
// `out_hypothesis` must be writable (either may be NULL to skip).
enum SbStatus sb_predict_next(const uint64_t *values,
                              size_t len,
                              double beta,
                              double sigma2,
                              uint64_t *out_next,
                              struct SbHypothesis *out_hypothesis);

// Writes the label (`A3`, `M2`, `M2+A4`) NUL-terminated into `buf`.
// `out_len`, if non-NULL, receives the label length without the NUL, also
// when the buffer is too small.
//
// # Safety
// `buf` must be NULL or point to `cap` writable bytes.
enum SbStatus sb_hypothesis_label(struct SbHypothesis hypothesis,
                                  char *buf,
                                  size_t cap,
                                  size_t *out_len);

// Parses a label into `out`.
//
// # Safety
// `label` must be a valid NUL-terminated string; `out` must be writable.
enum SbStatus sb_hypothesis_parse(const char *label, struct SbHypothesis *out);

// Generates `length` values into `out_values` (capacity `cap`).
// `mode` holds an `SbNoiseMode`; `sigma` is the noise standard deviation,
// ignored for `SB_NOISE_MODE_NONE`.
//
// # Safety
// `out_values` must point to `cap` writable `u64`s.
enum SbStatus sb_generate(struct SbHypothesis hypothesis,
                          uint64_t start,
                          size_t length,
                          uint32_t mode,
                          double sigma,
                          uint64_t seed,
                          uint64_t n_max,
                          uint64_t *out_values,
                          size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEQBAYES_H */
