#ifndef FRAME_LAB_H
#define FRAME_LAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum FlStatus {
  FL_STATUS_OK = 0,
  FL_STATUS_NULL_POINTER = 1,
  FL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Parameters outside the domain of the requested quantity.
   */
  FL_STATUS_DOMAIN = 3,
  FL_STATUS_INFEASIBLE = 4,
  FL_STATUS_NOT_CONVERGED = 5,
  /**
   * A ratio of the form 0/0.
   */
  FL_STATUS_INDETERMINATE = 6,
  FL_STATUS_BUFFER_TOO_SMALL = 7,
  FL_STATUS_PANIC = 8,
} FlStatus;

/**
 * Opaque vector system.
 */
typedef struct FlSystem FlSystem;

/**
 * Closed-form values for one parameter set. `has_*` flags mark which
 * optional values are present; absent values are set to 0.
 */
typedef struct FlBounds {
  /**
   * Optimum at zero noise; `INFINITY` when `count <= dim`.
   */
  double sigma0_value;
  double uniform_argmin_c;
  double uniform_value;
  double uniform_answer;
  double welch_value;
  bool count_bound_valid;
  double count_bound;
  bool has_max_nonminimal_count;
  uint64_t max_nonminimal_count;
  bool mu_condition_holds;
  bool has_mu_upper;
  double mu_upper;
} FlBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code (an `FlStatus` value). Never null.
 */
const char *fl_status_message(int32_t status);

/**
 * Message of the last failed call on this thread, or "" after a success.
 * The pointer stays valid until the next `fl_*` call on the same thread.
 */
const char *fl_last_error_message(void);

/**
 * Copies `dim * count` row-major coordinates into a new system.
 *
 * # Safety
 * `coords` must point to `dim * count` readable doubles and `out` must be writable.
 */
enum FlStatus fl_system_new(size_t dim, size_t count, const double *coords, struct FlSystem **out);

/**
 * Releases a system. Null is ignored.
 *
 * # Safety
 * `system` must come from this library and must not be used afterwards.
 */
void fl_system_free(struct FlSystem *system);

/**
 * Dimension of the system, or 0 for a null handle.
 *
 * # Safety
 * `system` must be null or a live handle.
 */
size_t fl_system_dim(const struct FlSystem *system);

/**
 * Number of vectors, or 0 for a null handle.
 *
 * # Safety
 * `system` must be null or a live handle.
 */
size_t fl_system_count(const struct FlSystem *system);

/**
 * Copies the row-major coordinates into `out`, which holds `len` doubles.
 *
 * # Safety
 * `system` must be a live handle and `out` must point to `len` writable doubles.
 */
enum FlStatus fl_system_copy_coords(const struct FlSystem *system, double *out, size_t len);

/**
 * Random directions with squared norms uniform in `[c1, c2]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FlStatus fl_random_system(size_t dim,
                               size_t count,
                               double c1,
                               double c2,
                               uint64_t seed,
                               struct FlSystem **out);

/**
 * Tight frame of `count` vectors with squared norm `norm2` in dimension `dim`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FlStatus fl_build_untf(size_t dim,
                            size_t count,
                            double norm2,
                            uint64_t seed,
                            struct FlSystem **out);

/**
 * Smallest per-vector ratio; `INFINITY` when every ratio is infinite.
 *
 * # Safety
 * `system` must be a live handle and `min_value` writable.
 */
enum FlStatus fl_evaluate(const struct FlSystem *system, double sigma, double *min_value);

/**
 * Writes the `count` per-vector ratios (`INFINITY` where infinite) into `out`.
 *
 * # Safety
 * `system` must be a live handle and `out` must point to `len` writable doubles.
 */
enum FlStatus fl_ratios(const struct FlSystem *system, double sigma, double *out, size_t len);

/**
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum FlStatus fl_frame_potential(const struct FlSystem *system, double *out);

/**
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum FlStatus fl_tightness_defect(const struct FlSystem *system, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum FlStatus fl_bounds(size_t dim,
                        size_t count,
                        double c1,
                        double c2,
                        double sigma,
                        struct FlBounds *out);

/**
 * Runs the optimizer with default settings apart from the given ones.
 * `threads == 0` uses every core; the result does not depend on it.
 *
 * # Safety
 * `out` and `min_value` must be writable.
 */
enum FlStatus fl_optimize(size_t dim,
                          size_t count,
                          double c1,
                          double c2,
                          double sigma,
                          uint64_t seed,
                          size_t restarts,
                          size_t max_iters,
                          size_t threads,
                          struct FlSystem **out,
                          double *min_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRAME_LAB_H */
