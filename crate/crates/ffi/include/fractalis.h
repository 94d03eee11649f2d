#ifndef FRACTALIS_H
#define FRACTALIS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum FractalisStatus {
  FRACTALIS_STATUS_OK = 0,
  FRACTALIS_STATUS_NULL_POINTER = 1,
  FRACTALIS_STATUS_INVALID_ARGUMENT = 2,
  FRACTALIS_STATUS_TOO_SHORT = 3,
  FRACTALIS_STATUS_ZERO_VARIANCE = 4,
  FRACTALIS_STATUS_SINGULAR_REGRESSION = 5,
  FRACTALIS_STATUS_TOO_FEW_SCALES = 6,
  FRACTALIS_STATUS_DEGENERATE_FIT = 7,
  FRACTALIS_STATUS_EVEN_POWER = 8,
  FRACTALIS_STATUS_EMBEDDING_FAILURE = 9,
  FRACTALIS_STATUS_LENGTH_MISMATCH = 10,
  FRACTALIS_STATUS_NO_OVERLAP = 11,
  FRACTALIS_STATUS_NON_POSITIVE_PRICE = 12,
  FRACTALIS_STATUS_OUT_OF_RANGE = 13,
  FRACTALIS_STATUS_INTERNAL = 14,
} FractalisStatus;

typedef enum FractalisScale {
  FRACTALIS_SCALE_PERCENT = 0,
  FRACTALIS_SCALE_RAW = 1,
} FractalisScale;

typedef enum FractalisPolicy {
  FRACTALIS_POLICY_HALVING = 0,
  FRACTALIS_POLICY_HARMONIC = 1,
} FractalisPolicy;

typedef enum FractalisMemoryClass {
  FRACTALIS_MEMORY_CLASS_EFFICIENT = 0,
  FRACTALIS_MEMORY_CLASS_ANTI_PERSISTENT = 1,
  FRACTALIS_MEMORY_CLASS_PERSISTENT = 2,
} FractalisMemoryClass;

/**
 * Opaque rolling Hurst result.
 */
typedef struct FractalisRolling FractalisRolling;

/**
 * Opaque return series.
 */
typedef struct FractalisSeries FractalisSeries;

/**
 * Hurst estimate with its slope t-test against 0.5.
 */
typedef struct FractalisHurst {
  double h;
  double log_c;
  double std_err;
  double t_stat;
  double p_value;
  double ci_low;
  double ci_high;
  double confidence;
  size_t k_points;
  double fractal_dimension;
  bool out_of_range;
} FractalisHurst;

typedef struct FractalisStats {
  size_t n;
  double mean;
  double median;
  double std_dev;
  double max;
  double min;
  double skewness;
  double kurtosis;
} FractalisStats;

/**
 * Test statistic and p-value. `stars` is 0 to 3 for p below 5%, 1%, 0.1%.
 * `df_or_lag` is the ADF lag order or the degrees of freedom.
 */
typedef struct FractalisTest {
  double statistic;
  double p_value;
  uint8_t stars;
  size_t df_or_lag;
} FractalisTest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version. Release with [`fractalis_string_free`].
 */
char *fractalis_version(void);

/**
 * Copy of the last error message recorded on this thread, or null if the
 * last call succeeded. Release with [`fractalis_string_free`].
 */
char *fractalis_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void fractalis_string_free(char *s);

/**
 * Wraps `len` return values (one per day from a fixed epoch) in a series.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum FractalisStatus fractalis_series_from_returns(const double *values,
                                                   size_t len,
                                                   enum FractalisScale scale,
                                                   struct FractalisSeries **out);

/**
 * Log returns of `len` daily prices.
 *
 * # Safety
 * `prices` must point to `len` readable doubles; `out` must be writable.
 */
enum FractalisStatus fractalis_series_from_prices(const double *prices,
                                                  size_t len,
                                                  enum FractalisScale scale,
                                                  struct FractalisSeries **out);

/**
 * # Safety
 * `series` must be null or a live handle.
 */
size_t fractalis_series_len(const struct FractalisSeries *series);

/**
 * Copies up to `capacity` values into `buffer`; `written` receives the count.
 *
 * # Safety
 * `series` must be a live handle, `buffer` writable for `capacity` doubles.
 */
enum FractalisStatus fractalis_series_values(const struct FractalisSeries *series,
                                             double *buffer,
                                             size_t capacity,
                                             size_t *written);

/**
 * New series with every return raised to the odd power `q`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum FractalisStatus fractalis_series_power(const struct FractalisSeries *series,
                                            uint32_t q,
                                            struct FractalisSeries **out);

/**
 * # Safety
 * `series` must be null or a handle not yet freed.
 */
void fractalis_series_free(struct FractalisSeries *series);

/**
 * # Safety
 * `out` must be writable.
 */
enum FractalisStatus fractalis_fgn(size_t n,
                                   double hurst,
                                   double sigma,
                                   uint64_t seed,
                                   struct FractalisSeries **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum FractalisStatus fractalis_white_noise(size_t n,
                                           double sigma,
                                           uint64_t seed,
                                           struct FractalisSeries **out);

/**
 * R/S Hurst estimate of the series.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum FractalisStatus fractalis_hurst(const struct FractalisSeries *series,
                                     enum FractalisPolicy policy,
                                     double confidence,
                                     struct FractalisHurst *out);

/**
 * Memory regime of an estimate `(h, p_value)` at level `alpha`.
 */
enum FractalisMemoryClass fractalis_classify(double h, double p_value, double alpha);

/**
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum FractalisStatus fractalis_describe(const struct FractalisSeries *series,
                                        struct FractalisStats *out);

/**
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum FractalisStatus fractalis_jarque_bera(const struct FractalisSeries *series,
                                           struct FractalisTest *out);

/**
 * ADF test with lag order `lag`; a negative `lag` selects the default.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum FractalisStatus fractalis_adf(const struct FractalisSeries *series,
                                   int64_t lag,
                                   struct FractalisTest *out);

/**
 * Pearson correlation of two equally long value arrays.
 *
 * # Safety
 * `a` and `b` must point to `len` readable doubles; `r` and `out` writable.
 */
enum FractalisStatus fractalis_pearson(const double *a,
                                       const double *b,
                                       size_t len,
                                       double *r,
                                       struct FractalisTest *out);

/**
 * Hurst estimates over windows of `window` returns advanced by `step`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum FractalisStatus fractalis_rolling(const struct FractalisSeries *series,
                                       size_t window,
                                       size_t step,
                                       enum FractalisPolicy policy,
                                       double confidence,
                                       struct FractalisRolling **out);

/**
 * # Safety
 * `rolling` must be null or a live handle.
 */
size_t fractalis_rolling_len(const struct FractalisRolling *rolling);

/**
 * Window `index`: end timestamp (Unix seconds) and estimate. `has_estimate`
 * is false for windows with too few usable scales.
 *
 * # Safety
 * `rolling` must be a live handle; the out pointers must be writable.
 */
enum FractalisStatus fractalis_rolling_get(const struct FractalisRolling *rolling,
                                           size_t index,
                                           int64_t *timestamp,
                                           bool *has_estimate,
                                           struct FractalisHurst *out);

/**
 * # Safety
 * `rolling` must be null or a handle not yet freed.
 */
void fractalis_rolling_free(struct FractalisRolling *rolling);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACTALIS_H */
