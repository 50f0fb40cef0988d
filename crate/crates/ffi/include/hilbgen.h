#ifndef HILBGEN_H
#define HILBGEN_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `HG_OK` is zero; everything else is an error.
 */
typedef enum HgStatus {
  HG_OK = 0,
  HG_NULL_POINTER = 1,
  HG_INVALID_ARGUMENT = 2,
  HG_PARSE = 3,
  HG_NON_UNIT = 4,
  HG_INEXACT_ROOT = 5,
  HG_OFFSET = 6,
  HG_OUT_OF_RANGE = 7,
  HG_OVERFLOW = 8,
  HG_UNKNOWN_ROW = 9,
  HG_NOT_PALINDROMIC = 10,
  HG_BASIS_OFFSET = 11,
  HG_DIVISIBILITY = 12,
  HG_MISSING_LOCAL_FACTOR = 13,
  HG_INCONSISTENT_DERIVATION = 14,
  HG_CONVERGENCE_DOMAIN = 15,
  HG_NUMERICALLY_SINGULAR = 16,
  HG_EMPTY_SAMPLE = 17,
  HG_IO = 18,
  HG_JSON = 19,
  HG_COMPUTATION = 20,
  HG_PANIC = 21,
} HgStatus;

/**
 * Opaque eta product.
 */
typedef struct HgEtaProduct HgEtaProduct;

/**
 * Opaque truncated q-series with integer coefficients.
 */
typedef struct HgSeries HgSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Free with `hg_string_free`.
 */
char *hg_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void hg_string_free(char *s);

/**
 * Parses `eta(q^m)^a * ...`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum HgStatus hg_eta_product_parse(const char *text, struct HgEtaProduct **out);

/**
 * Reference eta product of catalog row `row_id` (1 to 11).
 *
 * # Safety
 * `out` must be writable.
 */
enum HgStatus hg_eta_product_from_row(uint8_t row_id, struct HgEtaProduct **out);

/**
 * # Safety
 * `p` must be null or a live handle.
 */
void hg_eta_product_free(struct HgEtaProduct *p);

/**
 * # Safety
 * `p` must be a live handle; `level` must be writable.
 */
enum HgStatus hg_eta_product_level(const struct HgEtaProduct *p, uint64_t *level);

/**
 * Weight as a reduced fraction.
 *
 * # Safety
 * `p` must be a live handle; `num` and `den` must be writable.
 */
enum HgStatus hg_eta_product_weight(const struct HgEtaProduct *p, int64_t *num, int64_t *den);

/**
 * Writes 1 to `holomorphic` when the cusp orders are all nonnegative, else 0.
 *
 * # Safety
 * `p` must be a live handle; `holomorphic` must be writable.
 */
enum HgStatus hg_eta_product_is_holomorphic(const struct HgEtaProduct *p, int32_t *holomorphic);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_eta_product_to_string(const struct HgEtaProduct *p, char **out);

/**
 * q-expansion with `truncation` coefficients.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_eta_product_expand(const struct HgEtaProduct *p,
                                    size_t truncation,
                                    struct HgSeries **out);

/**
 * Builds `q^offset * (c_0 + c_1 q + ...)` from `len` integers.
 *
 * # Safety
 * `coeffs` must point to `len` readable values; `out` must be writable.
 */
enum HgStatus hg_series_from_i64(int64_t offset,
                                 const int64_t *coeffs,
                                 size_t len,
                                 struct HgSeries **out);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
void hg_series_free(struct HgSeries *s);

/**
 * Number of stored coefficients.
 *
 * # Safety
 * `s` must be a live handle; `len` must be writable.
 */
enum HgStatus hg_series_len(const struct HgSeries *s, size_t *len);

/**
 * Exponent of the first coefficient as a reduced fraction.
 *
 * # Safety
 * `s` must be a live handle; `num` and `den` must be writable.
 */
enum HgStatus hg_series_offset(const struct HgSeries *s, int64_t *num, int64_t *den);

/**
 * Coefficient `i` as a 64-bit integer; `HG_OVERFLOW` when it does not fit.
 *
 * # Safety
 * `s` must be a live handle; `value` must be writable.
 */
enum HgStatus hg_series_coeff_i64(const struct HgSeries *s, size_t i, int64_t *value);

/**
 * Coefficient `i` in decimal.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_series_coeff_string(const struct HgSeries *s, size_t i, char **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum HgStatus hg_series_mul(const struct HgSeries *a,
                            const struct HgSeries *b,
                            struct HgSeries **out);

/**
 * Multiplicative inverse; the leading coefficient must be 1 or -1.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_series_inverse(const struct HgSeries *s, struct HgSeries **out);

/**
 * `n`-th root with leading coefficient 1.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_series_nth_root(const struct HgSeries *s, uint32_t n, struct HgSeries **out);

/**
 * JSON form `{"offset_num", "offset_den", "coeffs": [...]}`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum HgStatus hg_series_to_json(const struct HgSeries *s, char **out);

/**
 * Normalized BPS table `n_d(h)/16` for `d <= dmax`, `h <= hmax` as CSV.
 *
 * # Safety
 * `out` must be writable.
 */
enum HgStatus hg_bps_table_csv(size_t dmax, size_t hmax, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HILBGEN_H */
