#ifndef EAQECC_H
#define EAQECC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Sentinel values of [`EaqParams::distance`].
 */
#define EAQ_DISTANCE_INFINITE -1

#define EAQ_DISTANCE_UNKNOWN -2

typedef enum EaqStatus {
  EAQ_STATUS_OK = 0,
  EAQ_STATUS_NULL_POINTER = 1,
  /**
   * bad ring parameters or defining polynomial
   */
  EAQ_STATUS_INVALID_RING = 2,
  /**
   * malformed code text, residue out of range, or bad dimensions
   */
  EAQ_STATUS_INVALID_INPUT = 3,
  /**
   * a configured enumeration or matrix cap was hit
   */
  EAQ_STATUS_LIMIT_EXCEEDED = 4,
  /**
   * unknown report command
   */
  EAQ_STATUS_UNKNOWN_COMMAND = 5,
  EAQ_STATUS_INTERNAL = 6,
  EAQ_STATUS_PANIC = 7,
} EaqStatus;

typedef struct EaqCode EaqCode;

typedef struct EaqRing EaqRing;

/**
 * Code parameters; sizes are exponents of the ring characteristic's prime.
 */
typedef struct EaqParams {
  size_t n;
  size_t c;
  uint32_t log_p_code;
  uint32_t log_p_extended;
  uint32_t log_p_k_exact;
  int64_t log_p_k_lower;
  int64_t log_p_k_upper;
  /**
   * minimum distance, or one of the `EAQ_DISTANCE_*` sentinels
   */
  int64_t distance;
} EaqParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds `GR(p^b, m)` with its canonical defining polynomial.
 *
 * # Safety
 * `out_ring` must be valid for writes.
 */
enum EaqStatus eaq_ring_new(uint64_t p, uint32_t b, size_t m, struct EaqRing **out_ring);

/**
 * Builds `GR(p^b, m)` from `h`, given as `m + 1` coefficients low to high.
 *
 * # Safety
 * `h` must point to `h_len` readable values and `out_ring` must be valid
 * for writes.
 */
enum EaqStatus eaq_ring_new_with_h(uint64_t p,
                                   uint32_t b,
                                   size_t m,
                                   const uint64_t *h,
                                   size_t h_len,
                                   struct EaqRing **out_ring);

/**
 * Number of ring elements, `p^{bm}`.
 *
 * # Safety
 * `ring` must come from `eaq_ring_new*`; `size` must be valid for writes.
 */
enum EaqStatus eaq_ring_size(const struct EaqRing *ring, uint64_t *size);

/**
 * # Safety
 * `ring` must be null or come from `eaq_ring_new*` and not be freed yet.
 */
void eaq_ring_free(struct EaqRing *ring);

/**
 * Code spanned by `rows` generators in expanded coordinates: each row holds
 * `2·n·m` residues modulo `p^b`, all x coordinates first, then all y.
 *
 * # Safety
 * `rows` must point to `row_count · 2·n·m` readable values (it may be null
 * when `row_count` is 0); `ring` must be live and `out_code` writable.
 */
enum EaqStatus eaq_code_new(const struct EaqRing *ring,
                            size_t n,
                            const uint64_t *rows,
                            size_t row_count,
                            struct EaqCode **out_code);

/**
 * Parses a code file held in memory (the format the command-line tool
 * reads).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out_code` writable.
 */
enum EaqStatus eaq_code_parse(const char *text, struct EaqCode **out_code);

/**
 * # Safety
 * `code` must be null or come from `eaq_code_new`/`eaq_code_parse` and not
 * be freed yet.
 */
void eaq_code_free(struct EaqCode *code);

/**
 * `log_p |C|`.
 *
 * # Safety
 * `code` must be live and `log_card` writable.
 */
enum EaqStatus eaq_code_log_cardinality(const struct EaqCode *code, uint32_t *log_card);

/**
 * Fewest entanglement qudits over all self-orthogonal extensions.
 *
 * # Safety
 * `code` must be live and `degree` writable.
 */
enum EaqStatus eaq_min_entanglement_degree(const struct EaqCode *code, size_t *degree);

/**
 * Parameters of the code built from the minimal extension. The distance
 * search enumerates at most `limit` words; past that `distance` is
 * `EAQ_DISTANCE_UNKNOWN` and the status is still `Ok`.
 *
 * # Safety
 * `code` must be live and `params` writable.
 */
enum EaqStatus eaq_code_params(const struct EaqCode *code,
                               uint64_t limit,
                               struct EaqParams *params);

/**
 * JSON report for `command` ("params", "decompose", "extend", "dual",
 * "distance" or "verify"), identical to the command-line output with
 * default flags. Returns `LimitExceeded` when a cap shortened the report;
 * `*json` is set in that case too and for error reports, and must be
 * released with `eaq_string_free`.
 *
 * # Safety
 * `code` must be live, `command` NUL-terminated, `json` writable.
 */
enum EaqStatus eaq_code_report_json(const struct EaqCode *code, const char *command, char **json);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void eaq_string_free(char *s);

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *eaq_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EAQECC_H */
