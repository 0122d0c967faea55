#ifndef DOTPAIRS_H
#define DOTPAIRS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DpStatus {
  DP_STATUS_OK = 0,
  DP_STATUS_NULL_POINTER = 1,
  DP_STATUS_INVALID_UTF8 = 2,
  DP_STATUS_PARSE = 3,
  DP_STATUS_INVALID_PARAMETER = 4,
  DP_STATUS_FIELD_MISMATCH = 5,
  DP_STATUS_VALIDATION = 6,
  DP_STATUS_UNSUPPORTED = 7,
  DP_STATUS_IO = 8,
  DP_STATUS_INTERNAL = 9,
} DpStatus;

typedef enum DpCountMethod {
  DP_COUNT_METHOD_FAST = 0,
  DP_COUNT_METHOD_BRUTE = 1,
} DpCountMethod;

/**
 * Opaque point set.
 */
typedef struct DpPointSet DpPointSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *dp_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *dp_version(void);

/**
 * Parses a point-set JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum DpStatus dp_point_set_from_json(const char *json, struct DpPointSet **out);

/**
 * Loads a point-set file.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum DpStatus dp_point_set_load(const char *path, struct DpPointSet **out);

/**
 * Serializes a set to canonical JSON; free the result with [`dp_string_free`].
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_point_set_to_json(const struct DpPointSet *set, char **out);

/**
 * # Safety
 * `set` must be a live handle; `out_len` and `out_dim` must be writable.
 */
enum DpStatus dp_point_set_shape(const struct DpPointSet *set, size_t *out_len, size_t *out_dim);

/**
 * Field characteristic: 0 for the rationals, `p` for `F_p`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_point_set_characteristic(const struct DpPointSet *set, uint64_t *out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void dp_point_set_free(struct DpPointSet *set);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void dp_string_free(char *s);

/**
 * # Safety
 * `out` must be writable.
 */
enum DpStatus dp_gen_line_fan(size_t n, size_t s, struct DpPointSet **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DpStatus dp_gen_separated_grid(size_t n, size_t m, struct DpPointSet **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DpStatus dp_gen_pencil(size_t k, struct DpPointSet **out);

/**
 * `beta` is a rational in scalar text form, e.g. `"5"` or `"-1/2"`.
 *
 * # Safety
 * `beta` must be a nul-terminated string; `out` must be writable.
 */
enum DpStatus dp_gen_highdim_cubic(size_t a_count, const char *beta, struct DpPointSet **out);

/**
 * `|Π_{α,β}|` with α, β in scalar text form for the set's field.
 *
 * # Safety
 * `set` must be a live handle, `alpha`/`beta` nul-terminated strings and
 * `out` writable.
 */
enum DpStatus dp_count(const struct DpPointSet *set,
                       const char *alpha,
                       const char *beta,
                       enum DpCountMethod method,
                       uint64_t *out);

/**
 * Largest number of points on a hyperplane and on a codimension-2 flat.
 *
 * # Safety
 * `set` must be a live handle; the out pointers must be writable.
 */
enum DpStatus dp_flat_stats(const struct DpPointSet *set, size_t *out_s_star, size_t *out_t_star);

/**
 * Runs every applicable bound check with default envelope options and
 * returns the reports as a JSON array. `out_all_passed` is set to whether
 * every hard check passed; a failing check is not an error status.
 *
 * # Safety
 * `set` must be a live handle, `alpha`/`beta` nul-terminated strings and
 * the out pointers writable.
 */
enum DpStatus dp_verify_json(const struct DpPointSet *set,
                             const char *alpha,
                             const char *beta,
                             char **out_json,
                             bool *out_all_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DOTPAIRS_H */
