#ifndef HIGHER_DIRAC_H
#define HIGHER_DIRAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdbool.h>
#include <stdint.h>

/**
 * Result codes. The first four match the command-line exit codes.
 */
typedef enum HdStatus {
  HD_STATUS_OK = 0,
  HD_STATUS_CHECK_FAILED = 1,
  HD_STATUS_SHALLOW_TRUNCATION = 2,
  HD_STATUS_INPUT_ERROR = 3,
  HD_STATUS_NULL_POINTER = 4,
  HD_STATUS_BUFFER_TOO_SMALL = 5,
  HD_STATUS_PANIC = 6,
} HdStatus;

/**
 * An analyzed module: its report and the report rendered as JSON.
 */
typedef struct HdAnalysis HdAnalysis;

/**
 * Message for the last failed call on this thread, or `""`. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *hd_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hd_version(void);

/**
 * Analyzes a builtin module (`P`, `verma:<λ>`, `finite:<n>`, `trivial`,
 * `sum:(…)`) or a module spec file, truncated at `depth`. Builtins are
 * also compared against a deeper truncation; a depth that changes the
 * result gives `HD_STATUS_SHALLOW_TRUNCATION`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HdStatus hd_analyze_module(const char *name, size_t depth, struct HdAnalysis **out);

/**
 * Analyzes the middle term of a builtin sequence (`P`, `infchar`) or a
 * sequence spec file, including additivity, six-term and triangle checks.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HdStatus hd_analyze_ses(const char *name, size_t depth, struct HdAnalysis **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from `hd_analyze_*` and not have been freed already.
 */
void hd_analysis_free(struct HdAnalysis *h);

/**
 * The report as JSON, owned by the handle.
 *
 * # Safety
 * `h` must be a live handle. Returns null for a null handle.
 */
const char *hd_analysis_report_json(const struct HdAnalysis *h);

/**
 * `HD_STATUS_OK` when every check in the report passed, else
 * `HD_STATUS_CHECK_FAILED`.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum HdStatus hd_analysis_checks(const struct HdAnalysis *h);

/**
 * Jordan block sizes of the generalized 0-eigenspace, largest first.
 * `*len` is always set to the number of sizes; with `cap` too small the
 * call returns `HD_STATUS_BUFFER_TOO_SMALL` and writes nothing.
 *
 * # Safety
 * `h` must be a live handle, `buf` valid for `cap` writes, `len` valid.
 */
enum HdStatus hd_analysis_jordan_sizes(const struct HdAnalysis *h,
                                       size_t *buf,
                                       size_t cap,
                                       size_t *len);

/**
 * `dim H^k` for `k = 0, 1, …` up to the last nonzero degree.
 *
 * # Safety
 * As for [`hd_analysis_jordan_sizes`].
 */
enum HdStatus hd_analysis_cohomology_dims(const struct HdAnalysis *h,
                                          size_t *buf,
                                          size_t cap,
                                          size_t *len);

/**
 * Whether an exact triangle with side dimensions `h1, h2, h3` exists.
 * When it does and `a` is not null, writes the three multiplicities.
 *
 * # Safety
 * `a` must be null or valid for three writes.
 */
bool hd_triangle_criterion(size_t h1, size_t h2, size_t h3, size_t *a);

/**
 * Runs the property fuzz suite and writes the number of counterexamples.
 *
 * # Safety
 * `counterexamples` must be a valid pointer.
 */
enum HdStatus hd_fuzz(uint64_t seed, size_t cases, size_t *counterexamples);

#endif  /* HIGHER_DIRAC_H */
