#ifndef RIGORKIT_H
#define RIGORKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  RK_STATUS_OK = 0,
  RK_STATUS_NULL_ARGUMENT = 1,
  RK_STATUS_INVALID_UTF8 = 2,
  RK_STATUS_PARSE = 3,
  RK_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A computation ran but could not produce a result (budget, domain).
   */
  RK_STATUS_COMPUTATION = 5,
  RK_STATUS_PANIC = 6,
} RkStatus;

/**
 * Archive of final plane graphs.
 */
typedef struct RkArchive RkArchive;

/**
 * Outward-rounded enclosure of a real number.
 */
typedef struct RkInterval RkInterval;

/**
 * Interval linear system `A x <= b`.
 */
typedef struct RkLpSystem RkLpSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *rk_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *rk_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void rk_string_free(char *s);

/**
 * Enclosure of a named constant (`PI`, `SQRT2`, `ATAN_SQRT2_OVER_5`, `PT`,
 * `DELTA_OCT`) at `bits` bits of precision.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
RkStatus rk_constant(const char *name, uint32_t bits, RkInterval **out);

/**
 * Endpoints rounded outward to doubles.
 *
 * # Safety
 * `iv` must be a live handle; `lo` and `hi` must be writable.
 */
RkStatus rk_interval_bounds(const RkInterval *iv, double *lo, double *hi);

/**
 * Decimal rendering `[lo, hi]` with `digits` significant digits, rounded
 * outward.
 *
 * # Safety
 * `iv` must be a live handle; `out` must be writable.
 */
RkStatus rk_interval_to_string(const RkInterval *iv, uint32_t digits, char **out);

/**
 * # Safety
 * `iv` must be NULL or a live handle, freed once.
 */
void rk_interval_free(RkInterval *iv);

/**
 * Certified range of a built-in polynomial function (`DELTA`, `A0`..`A3`)
 * over a box `lo:hi[,lo:hi..]` by Bernstein subdivision. The endpoints
 * are exact rationals written as strings.
 *
 * # Safety
 * String arguments must be nul-terminated; `out_lo` and `out_hi` writable.
 */
RkStatus rk_bound_function(const char *function,
                           const char *domain,
                           const char *tolerance,
                           size_t budget,
                           char **out_lo,
                           char **out_hi);

/**
 * Run the built-in inequality corpus. `filter` may be NULL (all entries);
 * `budget` 0 keeps each entry's own budget. `all_ok` reports whether every
 * PaperStated entry was proven; `out_json` receives the full report.
 *
 * # Safety
 * `filter` must be NULL or nul-terminated; `all_ok` and `out_json` writable.
 */
RkStatus rk_corpus_run(const char *filter, size_t budget, bool *all_ok, char **out_json);

/**
 * Parse a constraint file; irrational coefficients are enclosed at `bits`.
 *
 * # Safety
 * `source` must be nul-terminated; `out` writable.
 */
RkStatus rk_lp_system_parse(const char *source, uint32_t bits, RkLpSystem **out);

/**
 * # Safety
 * `s` must be a live handle.
 */
size_t rk_lp_system_rows(const RkLpSystem *s);

/**
 * # Safety
 * `s` must be a live handle.
 */
size_t rk_lp_system_cols(const RkLpSystem *s);

/**
 * The midpoint LP handed to external solvers, in CPLEX LP format.
 *
 * # Safety
 * `s` must be a live handle; `out` writable.
 */
RkStatus rk_lp_emit(const RkLpSystem *s, char **out);

/**
 * Search for Farkas multipliers and check them exactly. `solver` NULL uses
 * the built-in solver; otherwise it is run as `solver problem.lp solution`.
 * `margin` may be NULL; when set it receives the exact margin of a
 * refutation, or NULL.
 *
 * # Safety
 * `s` must be a live handle; `solver` NULL or nul-terminated; `refuted`
 * writable.
 */
RkStatus rk_lp_refute(const RkLpSystem *s,
                      const char *solver,
                      uint64_t timeout_ms,
                      bool *refuted,
                      char **margin);

/**
 * Check multipliers given as `name value` lines or a `(v0, v1, ..)` vector.
 *
 * # Safety
 * `s` must be a live handle; `solution` nul-terminated; `refuted` writable;
 * `margin` NULL or writable.
 */
RkStatus rk_lp_check_certificate(const RkLpSystem *s,
                                 const char *solution,
                                 bool *refuted,
                                 char **margin);

/**
 * # Safety
 * `s` must be NULL or a live handle, freed once.
 */
void rk_lp_system_free(RkLpSystem *s);

/**
 * Final graphs reachable from the seed with `p + 3` outer vertices, up to
 * `max_vertices`. `tame` selects tame successors with triangle
 * finalization.
 *
 * # Safety
 * `out` must be writable.
 */
RkStatus rk_enumerate(uint32_t p, size_t max_vertices, bool tame, RkArchive **out);

/**
 * Parse an archive in the text or JSON format.
 *
 * # Safety
 * `source` must be nul-terminated; `out` writable.
 */
RkStatus rk_archive_parse(const char *source, RkArchive **out);

/**
 * # Safety
 * `a` must be a live handle.
 */
size_t rk_archive_len(const RkArchive *a);

/**
 * # Safety
 * `a` must be a live handle; `out` writable.
 */
RkStatus rk_archive_to_text(const RkArchive *a, char **out);

/**
 * Compare two archives up to isomorphism. `report` may be NULL.
 *
 * # Safety
 * `a` and `b` must be live handles; `equivalent` writable.
 */
RkStatus rk_archive_diff(const RkArchive *a, const RkArchive *b, bool *equivalent, char **report);

/**
 * # Safety
 * `a` must be NULL or a live handle, freed once.
 */
void rk_archive_free(RkArchive *a);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIGORKIT_H */
