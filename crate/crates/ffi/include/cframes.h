#ifndef CFRAMES_H
#define CFRAMES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  CF_STATUS_SHAPE_MISMATCH = 3,
  CF_STATUS_NOT_INVERTIBLE = 4,
  CF_STATUS_NOT_A_FRAME = 5,
  CF_STATUS_NUMERIC_FAILURE = 6,
  CF_STATUS_PANIC = 7,
} CfStatus;

/**
 * A sampled frame: `d` vectors per point of a measure space.
 */
typedef struct CfFrame CfFrame;

/**
 * A finite weighted measure space.
 */
typedef struct CfSpace CfSpace;

/**
 * A complex symbol bound to one measure space.
 */
typedef struct CfSymbol CfSymbol;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL terminated,
 * truncated to `len` bytes) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
uintptr_t cf_last_error_message(char *buf, uintptr_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

/**
 * A space of `n` points with `arity` coordinates each (`points` row-major,
 * `n × arity`) and positive `weights`.
 *
 * # Safety
 * `points` must hold `n * arity` values, `weights` `n` values, and `out` must be writable.
 */
CfStatus cf_space_new(const double *points,
                      uintptr_t n,
                      uintptr_t arity,
                      const double *weights,
                      CfSpace **out);

/**
 * Midpoint rule on `[a, b]` with `n` cells.
 *
 * # Safety
 * `out` must be writable.
 */
CfStatus cf_space_uniform(double a, double b, uintptr_t n, CfSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from this library that has not been freed.
 */
void cf_space_free(CfSpace *space);

/**
 * # Safety
 * `space` must be a live handle.
 */
uintptr_t cf_space_len(const CfSpace *space);

/**
 * A frame of `d`-dimensional vectors over `space`; `re`/`im` are `d × N`
 * column-major, column `j` belonging to point `j`.
 *
 * # Safety
 * `space` must be a live handle, `re` and `im` must hold `d * N` values.
 */
CfStatus cf_frame_new(const CfSpace *space,
                      uintptr_t d,
                      const double *re,
                      const double *im,
                      CfFrame **out);

/**
 * The full Gabor system on `ℤ_d` for a window of length `d`.
 *
 * # Safety
 * `re` and `im` must hold `d` values, `out` must be writable.
 */
CfStatus cf_frame_gabor(uintptr_t d, const double *re, const double *im, CfFrame **out);

/**
 * # Safety
 * `frame` must be null or a live handle.
 */
void cf_frame_free(CfFrame *frame);

/**
 * # Safety
 * `frame` must be a live handle.
 */
uintptr_t cf_frame_dim(const CfFrame *frame);

/**
 * # Safety
 * `frame` must be a live handle.
 */
uintptr_t cf_frame_len(const CfFrame *frame);

/**
 * Optimal frame bounds; `is_frame` may be null.
 *
 * # Safety
 * `frame` must be a live handle; `lower` and `upper` writable.
 */
CfStatus cf_frame_bounds(const CfFrame *frame, double *lower, double *upper, bool *is_frame);

/**
 * Frame operator as a `d × d` column-major matrix.
 *
 * # Safety
 * `frame` must be a live handle; `re` and `im` must hold `d * d` writable values.
 */
CfStatus cf_frame_operator(const CfFrame *frame, double *re, double *im);

/**
 * A symbol with `space_len(space)` complex values.
 *
 * # Safety
 * `space` must be a live handle; `re` and `im` must hold one value per point.
 */
CfStatus cf_symbol_new(const CfSpace *space, const double *re, const double *im, CfSymbol **out);

/**
 * # Safety
 * `symbol` must be null or a live handle.
 */
void cf_symbol_free(CfSymbol *symbol);

/**
 * `M_{m,F,G}` as a `d × d` column-major matrix.
 *
 * # Safety
 * All handles must be live; `re` and `im` must hold `d * d` writable values.
 */
CfStatus cf_multiplier(const CfSymbol *m,
                       const CfFrame *f,
                       const CfFrame *g,
                       double *re,
                       double *im);

/**
 * Schatten-`p` norm of `M_{m,F,G}`; `p = INFINITY` gives the operator norm.
 *
 * # Safety
 * All handles must be live; `out` writable.
 */
CfStatus cf_multiplier_schatten(const CfSymbol *m,
                                const CfFrame *f,
                                const CfFrame *g,
                                double p,
                                double *out);

/**
 * The norm budget for Schatten-`p` against which the multiplier is checked.
 *
 * # Safety
 * All handles must be live; `out` writable.
 */
CfStatus cf_multiplier_budget(const CfSymbol *m,
                              const CfFrame *f,
                              const CfFrame *g,
                              double p,
                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFRAMES_H */
