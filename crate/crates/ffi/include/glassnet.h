#ifndef GLASSNET_H
#define GLASSNET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum GlassnetStatus {
  GLASSNET_STATUS_OK = 0,
  GLASSNET_STATUS_NULL_POINTER = 1,
  GLASSNET_STATUS_INVALID_UTF8 = 2,
  GLASSNET_STATUS_PARSE = 3,
  /**
   * Output constraint violated, or malformed dimensions, sets or families.
   */
  GLASSNET_STATUS_VALIDATION = 4,
  GLASSNET_STATUS_NOT_STABLE = 5,
  GLASSNET_STATUS_OUT_OF_RANGE = 6,
  GLASSNET_STATUS_NUMERICAL = 7,
  GLASSNET_STATUS_INTERNAL = 8,
  GLASSNET_STATUS_PANIC = 9,
} GlassnetStatus;

/**
 * Opaque network handle.
 */
typedef struct GlassnetNetwork GlassnetNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent error message on this thread, or null. Valid until the next
 * failing call on the same thread; do not free.
 */
const char *glassnet_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void glassnet_string_free(char *s);

/**
 * Builds a network from an `n × n` row-major weight matrix.
 *
 * # Safety
 * `weights_row_major` must point to `n * n` doubles and `out` must be writable.
 */
enum GlassnetStatus glassnet_network_new(size_t n,
                                         const double *weights_row_major,
                                         bool allow_violations,
                                         struct GlassnetNetwork **out);

/**
 * Builds the `(n + 1)`-unit network with the constant input `mu` carried by a
 * clamped last unit.
 *
 * # Safety
 * `weights_row_major` must point to `n * n` doubles, `mu` to `n` doubles, and `out`
 * must be writable.
 */
enum GlassnetStatus glassnet_network_with_input(size_t n,
                                                const double *weights_row_major,
                                                const double *mu,
                                                bool allow_violations,
                                                struct GlassnetNetwork **out);

/**
 * Parses the JSON network format used by the CLI.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum GlassnetStatus glassnet_network_from_json(const char *json,
                                               bool allow_violations,
                                               struct GlassnetNetwork **out);

/**
 * Frees a network. Null is ignored.
 *
 * # Safety
 * `network` must come from a constructor above and not have been freed.
 */
void glassnet_network_free(struct GlassnetNetwork *network);

/**
 * Number of units, including a clamped input unit.
 *
 * # Safety
 * `network` must be a live handle and `out` writable.
 */
enum GlassnetStatus glassnet_network_dim(const struct GlassnetNetwork *network, size_t *out);

/**
 * Tests whether the set of 1-based `indices` is stable. `margin` may be null.
 *
 * # Safety
 * `indices` must point to `len` values; `stable` must be writable.
 */
enum GlassnetStatus glassnet_is_stable_set(const struct GlassnetNetwork *network,
                                           const uint32_t *indices,
                                           size_t len,
                                           bool *stable,
                                           double *margin);

/**
 * JSON array of the stable set reports, in canonical order.
 *
 * # Safety
 * `network` must be a live handle and `out` writable.
 */
enum GlassnetStatus glassnet_stable_sets_json(const struct GlassnetNetwork *network, char **out);

/**
 * Simulates from `x0` and returns the trajectory as JSON.
 *
 * # Safety
 * `x0` must point to `len` doubles and `out` must be writable.
 */
enum GlassnetStatus glassnet_simulate_json(const struct GlassnetNetwork *network,
                                           const double *x0,
                                           size_t len,
                                           double max_time,
                                           size_t max_switches,
                                           char **out);

/**
 * Semipositive factorization of a stable set, as JSON.
 *
 * # Safety
 * `indices` must point to `len` values and `out` must be writable.
 */
enum GlassnetStatus glassnet_factorize_json(const struct GlassnetNetwork *network,
                                            const uint32_t *indices,
                                            size_t len,
                                            double epsilon,
                                            char **out);

/**
 * Closed-form count of allowed signatures for one 1-based `row`, written as
 * a decimal string (counts can exceed 64 bits). `family` uses the CLI form,
 * e.g. `"nested:1;1,2"`; `mode` is `unconstrained`, `vanishing` or
 * `nonvanishing`.
 *
 * # Safety
 * `family` and `mode` must be nul-terminated strings and `out` writable.
 */
enum GlassnetStatus glassnet_count_signatures(const char *family,
                                              size_t n,
                                              size_t row,
                                              const char *mode,
                                              char **out);

/**
 * Library version, static storage.
 */
const char *glassnet_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GLASSNET_H */
