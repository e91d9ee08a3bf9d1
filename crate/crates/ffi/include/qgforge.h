#ifndef QGFORGE_H
#define QGFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `QG_OK` is zero; everything else is an error.
 */
typedef enum {
  QG_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QG_ERR_NULL = 1,
  /**
   * Malformed table or factor data.
   */
  QG_ERR_CONSTRUCTION = 2,
  /**
   * A division was requested on a magma that lacks it.
   */
  QG_ERR_AXIOM = 3,
  QG_ERR_PRECONDITION = 4,
  QG_ERR_CAPACITY = 5,
  QG_ERR_INTERNAL = 6,
  QG_ERR_PARSE = 7,
  QG_ERR_IO = 8,
  /**
   * The output buffer is too small; the needed length was still written.
   */
  QG_ERR_BUFFER_TOO_SMALL = 9,
  /**
   * Identities were checked and some failed.
   */
  QG_ERR_VERIFICATION = 10,
  /**
   * A Rust panic was caught at the boundary.
   */
  QG_ERR_PANIC = 11,
} QgStatus;

/**
 * Values for the `which` argument of [`qg_magma_subset`].
 */
typedef enum {
  QG_SUBSET_COMMUTANT = 0,
  QG_SUBSET_LEFT_NUCLEUS = 1,
  QG_SUBSET_MIDDLE_NUCLEUS = 2,
  QG_SUBSET_RIGHT_NUCLEUS = 3,
  QG_SUBSET_NUCLEUS = 4,
  QG_SUBSET_CENTER = 5,
  /**
   * Requires a fan quasigroup.
   */
  QG_SUBSET_FAN = 6,
} QgSubset;

/**
 * Opaque magma handle.
 */
typedef struct QgMagma QgMagma;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a
 * successful call. Valid until the next qgforge call on this thread.
 */
const char *qg_last_error_message(void);

/**
 * Builds a magma from a row-major table of `order * order` entries.
 *
 * # Safety
 * `table` must point to `order * order` readable values; `out` must be
 * writable.
 */
QgStatus qg_magma_from_table(size_t order, const size_t *table, QgMagma **out);

/**
 * Parses a magma in the text or JSON file format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
QgStatus qg_magma_parse(const char *text, QgMagma **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must come from a qgforge constructor and not be freed twice.
 */
void qg_magma_free(QgMagma *m);

/**
 * Order of the magma; 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t qg_magma_order(const QgMagma *m);

/**
 * `*out = a·b`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QgStatus qg_magma_mul(const QgMagma *m, size_t a, size_t b, size_t *out);

/**
 * `*out = a\b`, the `x` with `a·x = b`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QgStatus qg_magma_div_left(const QgMagma *m, size_t a, size_t b, size_t *out);

/**
 * `*out = b/a`, the `y` with `y·a = b`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QgStatus qg_magma_div_right(const QgMagma *m, size_t b, size_t a, size_t *out);

/**
 * 1 if every row is a permutation, 0 otherwise or for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
int32_t qg_magma_is_left_quasigroup(const QgMagma *m);

/**
 * 1 if every column is a permutation, 0 otherwise or for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
int32_t qg_magma_is_right_quasigroup(const QgMagma *m);

/**
 * 1 if the table is a Latin square, 0 otherwise or for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
int32_t qg_magma_is_quasigroup(const QgMagma *m);

/**
 * Two-sided unit; `QG_ERR_PRECONDITION` if there is none.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QgStatus qg_magma_unit(const QgMagma *m, size_t *out);

/**
 * Writes the elements of the subset `which` (a [`QgSubset`] value) in
 * increasing order to `buf` and their number to `*len`. With `cap` too small, only `*len` is written and the
 * call returns `QG_ERR_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `m` must be a live handle; `buf` must have room for `cap` values;
 * `len` must be writable.
 */
QgStatus qg_magma_subset(const QgMagma *m,
                         int32_t which,
                         size_t *buf,
                         size_t cap,
                         size_t *len);

/**
 * 1 if the magma is a fan quasigroup, 0 otherwise or for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
int32_t qg_magma_is_fan(const QgMagma *m);

/**
 * Direct product `a × b`, pairs encoded as `x·|b| + y`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
QgStatus qg_direct_product(const QgMagma *a, const QgMagma *b, QgMagma **out);

/**
 * Canonical JSON magma file for `m`. Free the string with
 * [`qg_string_free`].
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QgStatus qg_magma_to_json(const QgMagma *m, char **out);

/**
 * Releases a string returned by qgforge. Null is ignored.
 *
 * # Safety
 * `s` must come from qgforge and not be freed twice.
 */
void qg_string_free(char *s);

/**
 * Checks the identities selected by `selection` (for example
 * `"70-79,82-94"`; null selects all) and writes the number of failing
 * cases to `*failures`. Returns `QG_ERR_VERIFICATION` when some fail and
 * `QG_ERR_PRECONDITION` when fan identities are requested of a magma that
 * is not a fan quasigroup.
 *
 * # Safety
 * `m` must be a live handle; `selection` null or nul-terminated;
 * `failures` writable.
 */
QgStatus qg_verify_identities(const QgMagma *m, const char *selection, uint64_t *failures);

/**
 * Number of Latin squares of order `n` (reduced ones if `reduced` is
 * nonzero), for `1 <= n <= 7`.
 *
 * # Safety
 * `out` must be writable.
 */
QgStatus qg_count_latin_squares(size_t n, int32_t reduced, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGFORGE_H */
