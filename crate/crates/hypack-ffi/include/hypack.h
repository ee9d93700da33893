#ifndef HYPACK_H
#define HYPACK_H

/* Generated by cbindgen from the hypack-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum HypackStatus {
  HYPACK_STATUS_OK = 0,
  HYPACK_STATUS_NULL_POINTER = 1,
  HYPACK_STATUS_INVALID_ARGUMENT = 2,
  HYPACK_STATUS_INADMISSIBLE = 3,
  HYPACK_STATUS_UNREALIZABLE = 4,
  HYPACK_STATUS_INTERNAL = 5,
} HypackStatus;

/**
 * Attainability of the packing bound.
 */
typedef enum HypackAttainability {
  HYPACK_ATTAINABILITY_ATTAINED_BY_CONSTRUCTION = 0,
  HYPACK_ATTAINABILITY_NOT_ATTAINED = 1,
  HYPACK_ATTAINABILITY_NECESSARY_CONDITION_FAILS = 2,
  HYPACK_ATTAINABILITY_UNKNOWN = 3,
} HypackAttainability;

/**
 * Opaque surface handle.
 */
typedef struct HypackSurface HypackSurface;

/**
 * Bounds for one `(chi, n, k)`. Valences are fractions `num/den`.
 */
typedef struct HypackBounds {
  double r_naive;
  double r_boroczky;
  double r_vor;
  double density;
  int64_t i_num;
  int64_t i_den;
  int64_t j_num;
  int64_t j_den;
  enum HypackAttainability attainability;
} HypackBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *hypack_status_message(enum HypackStatus status);

/**
 * Packing-radius bound `r_vor` for `(chi, n, k)`.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum HypackStatus hypack_solve_vor(int64_t chi, int64_t n, int64_t k, double *out);

/**
 * Full bound report for `(chi, n, k)`.
 *
 * # Safety
 * `out` must be null or valid for writing one `HypackBounds`.
 */
enum HypackStatus hypack_bounds(int64_t chi, int64_t n, int64_t k, struct HypackBounds *out);

/**
 * Builds the extremal surface for `(chi, n, k, orientable)`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer. On success the
 * handle must be released with `hypack_surface_free`.
 */
enum HypackStatus hypack_surface_construct(int64_t chi,
                                           int64_t n,
                                           int64_t k,
                                           bool orientable,
                                           struct HypackSurface **out);

/**
 * Releases a surface handle. Null is ignored.
 *
 * # Safety
 * `surface` must be null or a handle from `hypack_surface_construct` that
 * has not been freed.
 */
void hypack_surface_free(struct HypackSurface *surface);

/**
 * Number of triangles of a surface.
 *
 * # Safety
 * `surface` must be null or a live handle; `out` null or writable.
 */
enum HypackStatus hypack_surface_triangle_count(const struct HypackSurface *surface, size_t *out);

/**
 * Number of vertices of a surface, marked ones included.
 *
 * # Safety
 * `surface` must be null or a live handle; `out` null or writable.
 */
enum HypackStatus hypack_surface_vertex_count(const struct HypackSurface *surface, size_t *out);

/**
 * Rechecks the combinatorial and geometric certificates of a surface.
 *
 * # Safety
 * `surface` must be null or a live handle; `passed` null or writable.
 */
enum HypackStatus hypack_surface_verify(const struct HypackSurface *surface, bool *passed);

/**
 * Serializes a surface as a schema-1 document. The string must be
 * released with `hypack_string_free`.
 *
 * # Safety
 * `surface` must be null or a live handle; `out` null or writable.
 */
enum HypackStatus hypack_surface_to_json(const struct HypackSurface *surface, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library that has not been freed.
 */
void hypack_string_free(char *s);

/**
 * Length of the geodesic crossing a non-separating strip.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum HypackStatus hypack_strip_nonsep_length(double delta, double h, double eps, double *out);

/**
 * Length of the geodesic crossing a separating strip.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum HypackStatus hypack_strip_sep_length(double a, double b, double h, double eps, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPACK_H */
