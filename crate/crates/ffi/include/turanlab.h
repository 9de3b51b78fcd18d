#ifndef TURANLAB_H
#define TURANLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TlStatus {
  TL_STATUS_OK = 0,
  /**
   * The call succeeded and the checked property does not hold.
   */
  TL_STATUS_VIOLATED = 1,
  TL_STATUS_INVALID_ARGUMENT = 2,
  TL_STATUS_PARSE_ERROR = 3,
  TL_STATUS_PRECONDITION = 4,
  TL_STATUS_TOO_LARGE = 5,
  TL_STATUS_BUDGET_EXHAUSTED = 6,
  TL_STATUS_IO_ERROR = 7,
  TL_STATUS_NULL_POINTER = 8,
  TL_STATUS_PANIC = 9,
} TlStatus;

/**
 * Opaque hypergraph handle.
 */
typedef struct TlHypergraph TlHypergraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on the thread.
 */
const char *tl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tl_version(void);

/**
 * Parses the plain-text format (`n r` header, one edge of 1-based labels
 * per line).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TlStatus tl_hypergraph_parse(const char *text, struct TlHypergraph **out);

/**
 * The balanced complete ℓ-partite r-graph on n vertices.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum TlStatus tl_hypergraph_turan(size_t n, size_t r, size_t ell, struct TlHypergraph **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `h` must come from this library and not be used afterwards.
 */
void tl_hypergraph_free(struct TlHypergraph *h);

/**
 * Vertex count; 0 for null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t tl_hypergraph_vertex_count(const struct TlHypergraph *h);

/**
 * Uniformity; 0 for null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t tl_hypergraph_uniformity(const struct TlHypergraph *h);

/**
 * Edge count; 0 for null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t tl_hypergraph_edge_count(const struct TlHypergraph *h);

/**
 * The plain-text form.
 *
 * # Safety
 * `h` must be a live handle and `out` a writable pointer.
 */
enum TlStatus tl_hypergraph_to_text(const struct TlHypergraph *h, char **out);

/**
 * Writes whether a 3-graph is cancellative.
 *
 * # Safety
 * `h` must be a live handle and `out` a writable pointer.
 */
enum TlStatus tl_is_cancellative(const struct TlHypergraph *h, bool *out);

/**
 * Writes whether no (ℓ+1)-set has all of its pairs covered.
 *
 * # Safety
 * `h` must be a live handle and `out` a writable pointer.
 */
enum TlStatus tl_is_k_free(const struct TlHypergraph *h, size_t ell, bool *out);

/**
 * Runs a named check (as in `turanlab verify`) and writes its JSON report.
 * `ell = 0` means "not given". Returns `Violated` with the report still
 * written when the check fails.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `h` a live handle and `out` a
 * writable pointer.
 */
enum TlStatus tl_verify_json(const char *name,
                             const struct TlHypergraph *h,
                             size_t ell,
                             char **out);

/**
 * Stability report as JSON. `method` is one of `cancellative`, `kfree`,
 * `generalized`, `bipartite`; `ell` and `r` are 0 when not needed.
 *
 * # Safety
 * `method` must be a NUL-terminated string, `h` a live handle and `out` a
 * writable pointer.
 */
enum TlStatus tl_stability_json(const char *method,
                                const struct TlHypergraph *h,
                                size_t ell,
                                size_t r,
                                char **out);

/**
 * Exact extremal number by exhaustive search, as a JSON record. `ell = 0`
 * means "not given"; `threads = 0` uses every core; `budget = 0` keeps the
 * default node budget.
 *
 * # Safety
 * `predicate` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TlStatus tl_extremal_number_json(size_t n,
                                      size_t r,
                                      const char *predicate,
                                      size_t ell,
                                      size_t threads,
                                      uint64_t budget,
                                      char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void tl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TURANLAB_H */
