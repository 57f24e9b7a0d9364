#ifndef SPINWIGNER_H
#define SPINWIGNER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum SwStatus {
  SW_STATUS_OK = 0,
  SW_STATUS_INVALID_ARGUMENT = 1,
  SW_STATUS_INVALID_CONFIG = 2,
  SW_STATUS_CONFIG_MISMATCH = 3,
  SW_STATUS_PARSE = 4,
  SW_STATUS_IO = 5,
  SW_STATUS_NULL_POINTER = 6,
  SW_STATUS_BUFFER_TOO_SMALL = 7,
  SW_STATUS_PANIC = 8,
} SwStatus;

/**
 * Monte Carlo configuration under construction.
 */
typedef struct SwConfig SwConfig;

/**
 * Result of [`sw_run`].
 */
typedef struct SwEstimate SwEstimate;

/**
 * One histogram bin. Standard errors are NaN with fewer than two chunks.
 */
typedef struct SwBin {
  double bin_lo;
  double bin_hi;
  double re_density;
  double im_density;
  double stderr_re;
  double stderr_im;
} SwBin;

typedef struct SwMetrics {
  uint64_t n_paths;
  double mean_weight_re;
  double mean_weight_im;
  double mean_weight_stderr_re;
  double mean_weight_stderr_im;
  double mean_abs_weight;
  double mean_abs_weight_stderr;
  double phase_quality;
  double phase_quality_stderr;
  double normalization_re;
  double normalization_im;
  double normalization_stderr_re;
  double normalization_stderr_im;
  double scaled_weight_variance;
} SwMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *sw_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sw_version(void);

/**
 * Smeared free-spin density at radius `s_radius` for kernel `(slices, width_scale)`.
 *
 * # Safety
 * `result` must be a valid pointer to a `double`.
 */
enum SwStatus sw_smeared_density(uint32_t two_s,
                                 uint32_t slices,
                                 double width_scale,
                                 double s_radius,
                                 double *result);

/**
 * Smeared one-dimensional marginal at `u`.
 *
 * # Safety
 * `result` must be a valid pointer to a `double`.
 */
enum SwStatus sw_smeared_marginal(uint32_t two_s,
                                  uint32_t slices,
                                  double width_scale,
                                  double u,
                                  double *result);

/**
 * Normalized character of the spin-`s` representation at angle `t`.
 *
 * # Safety
 * `result` must be a valid pointer to a `double`.
 */
enum SwStatus sw_char_free(uint32_t two_s, double t, double *result);

/**
 * Exact characteristic function of the `slices`-slice approximant at wave number `k`.
 *
 * # Safety
 * `re` and `im` must be valid pointers to `double`.
 */
enum SwStatus sw_discretised_char(uint32_t two_s,
                                  uint32_t slices,
                                  double k,
                                  double *re,
                                  double *im);

/**
 * Triplet and singlet populations of two spin-1/2 coupled by `coupling`.
 *
 * # Safety
 * `p_triplet` and `p_singlet` must be valid pointers to `double`.
 */
enum SwStatus sw_two_spin_weights(double beta,
                                  double coupling,
                                  double *p_triplet,
                                  double *p_singlet);

/**
 * Weight of the closed path through `n_points` unit vectors stored as
 * consecutive `x, y, z` triples.
 *
 * # Safety
 * `points` must hold `3 * n_points` doubles; `re` and `im` must be valid.
 */
enum SwStatus sw_loop_weight(uint32_t two_s,
                             const double *points,
                             size_t n_points,
                             double *re,
                             double *im);

/**
 * New configuration with default bins, chunking, seed 0 and `r_max = s+1`.
 *
 * # Safety
 * `result` must be a valid pointer; on success it receives a handle to free
 * with [`sw_config_free`].
 */
enum SwStatus sw_config_new(uint32_t two_s,
                            uint32_t slices,
                            uint64_t n_samples,
                            struct SwConfig **result);

/**
 * # Safety
 * `config` must come from [`sw_config_new`] and not be used afterwards.
 */
void sw_config_free(struct SwConfig *config);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum SwStatus sw_config_set_seed(struct SwConfig *config, uint64_t seed);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum SwStatus sw_config_set_bins(struct SwConfig *config, size_t n_bins);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum SwStatus sw_config_set_r_max(struct SwConfig *config, double r_max);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum SwStatus sw_config_set_chunk_size(struct SwConfig *config, uint64_t chunk_size);

/**
 * Enables the projected histogram along `(x, y, z)`, which is normalized.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum SwStatus sw_config_set_axis(struct SwConfig *config, double x, double y, double z);

/**
 * Runs the experiment. `workers = 0` uses every core; the result does not
 * depend on the worker count.
 *
 * # Safety
 * `config` must be a live handle and `result` a valid pointer; on success it
 * receives a handle to free with [`sw_estimate_free`].
 */
enum SwStatus sw_run(const struct SwConfig *config, size_t workers, struct SwEstimate **result);

/**
 * Union of two runs of the same experiment from disjoint streams.
 *
 * # Safety
 * `a` and `b` must be live handles and `result` a valid pointer.
 */
enum SwStatus sw_estimate_merge(const struct SwEstimate *a,
                                const struct SwEstimate *b,
                                struct SwEstimate **result);

/**
 * # Safety
 * `estimate` must come from this library and not be used afterwards.
 */
void sw_estimate_free(struct SwEstimate *estimate);

/**
 * # Safety
 * `estimate` must be a live handle and `result` a valid pointer.
 */
enum SwStatus sw_estimate_n_bins(const struct SwEstimate *estimate, size_t *result);

/**
 * Copies the radial (`marginal = 0`) or projected bins into `bins`.
 * `written` receives the bin count; if `capacity` is too small nothing is
 * copied and `SW_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `bins` must have room for `capacity` elements; `written` must be valid.
 */
enum SwStatus sw_estimate_bins(const struct SwEstimate *estimate,
                               int marginal,
                               struct SwBin *bins,
                               size_t capacity,
                               size_t *written);

/**
 * # Safety
 * `estimate` must be a live handle and `result` a valid pointer.
 */
enum SwStatus sw_estimate_metrics(const struct SwEstimate *estimate, struct SwMetrics *result);

/**
 * Writes the radial or projected histogram as CSV to `path`.
 *
 * # Safety
 * `estimate` must be a live handle and `path` a NUL-terminated UTF-8 string.
 */
enum SwStatus sw_estimate_write_csv(const struct SwEstimate *estimate,
                                    int marginal,
                                    const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINWIGNER_H */
