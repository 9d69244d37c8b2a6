#ifndef FRACLAB_H
#define FRACLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Inequality checked by a `FraclabBoundReport`.
 */
typedef enum FraclabInequality {
  FRACLAB_INEQUALITY_INTO_ITSELF = 0,
  FRACLAB_INEQUALITY_WEAK_TYPE = 1,
  FRACLAB_INEQUALITY_STRONG_CRITICAL = 2,
  FRACLAB_INEQUALITY_STRONG_SUBCRITICAL = 3,
  FRACLAB_INEQUALITY_STRONG_P1 = 4,
  FRACLAB_INEQUALITY_CHEBYSHEV = 5,
  FRACLAB_INEQUALITY_EMBEDDING_STRONG_WEAK = 6,
  FRACLAB_INEQUALITY_EMBEDDING_WEAK_STRONG = 7,
  FRACLAB_INEQUALITY_EMBEDDING_WEAK_WEAK = 8,
} FraclabInequality;

/**
 * Pointwise norm on vector values.
 */
typedef enum FraclabNorm {
  FRACLAB_NORM_EUCLIDEAN = 0,
  FRACLAB_NORM_MAX = 1,
  FRACLAB_NORM_SUM = 2,
} FraclabNorm;

/**
 * Result code of every fallible call.
 */
typedef enum FraclabStatus {
  FRACLAB_STATUS_OK = 0,
  FRACLAB_STATUS_NULL_POINTER = 1,
  FRACLAB_STATUS_DOMAIN = 2,
  FRACLAB_STATUS_REGIME = 3,
  FRACLAB_STATUS_UNSUPPORTED = 4,
  FRACLAB_STATUS_DIVERGENT = 5,
  FRACLAB_STATUS_NOT_LOCATED = 6,
  FRACLAB_STATUS_IO = 7,
  FRACLAB_STATUS_PANIC = 8,
} FraclabStatus;

/**
 * Opaque grid-function handle.
 */
typedef struct FraclabGrid FraclabGrid;

/**
 * Flat copy of a bound report. `alpha` is NaN when the inequality has no order.
 */
typedef struct FraclabBoundReport {
  enum FraclabInequality inequality;
  bool holds;
  double lhs;
  double rhs;
  double constant_used;
  double slack;
  double grid_tolerance;
  double p;
  double q;
  double alpha;
  double t0;
  double t1;
} FraclabBoundReport;

/**
 * Outcome of the non-compactness gap computation.
 */
typedef struct FraclabGapReport {
  double critical_q;
  double bound;
  double measured;
  double sequence_norm;
} FraclabGapReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *fraclab_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fraclab_version(void);

/**
 * Builds a grid function from `n` nodes and `n * dim` row-major values.
 *
 * # Safety
 * `nodes` must point to `n` doubles, `values` to `n * dim` doubles and
 * `out` to writable storage for one handle.
 */
enum FraclabStatus fraclab_grid_new(const double *nodes,
                                    const double *values,
                                    size_t n,
                                    size_t dim,
                                    enum FraclabNorm norm,
                                    struct FraclabGrid **out);

/**
 * Reads a grid function from a CSV file with header `t,v1,...,vd`.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum FraclabStatus fraclab_grid_read_csv(const char *path,
                                         enum FraclabNorm norm,
                                         struct FraclabGrid **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `grid` must come from this library and not be used afterwards.
 */
void fraclab_grid_free(struct FraclabGrid *grid);

/**
 * Number of nodes, or 0 for NULL.
 *
 * # Safety
 * `grid` must be NULL or a live handle.
 */
size_t fraclab_grid_len(const struct FraclabGrid *grid);

/**
 * Value dimension, or 0 for NULL.
 *
 * # Safety
 * `grid` must be NULL or a live handle.
 */
size_t fraclab_grid_dim(const struct FraclabGrid *grid);

/**
 * Copies the nodes into `out`, which holds `cap` doubles.
 *
 * # Safety
 * `out` must point to `cap` writable doubles.
 */
enum FraclabStatus fraclab_grid_copy_nodes(const struct FraclabGrid *grid, double *out, size_t cap);

/**
 * Copies the `len * dim` row-major values into `out`, which holds `cap` doubles.
 *
 * # Safety
 * `out` must point to `cap` writable doubles.
 */
enum FraclabStatus fraclab_grid_copy_values(const struct FraclabGrid *grid,
                                            double *out,
                                            size_t cap);

/**
 * `J^α` of a grid function on its own nodes; `use_fft` selects the FFT backend.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_rl_integral(const struct FraclabGrid *grid,
                                       double alpha,
                                       bool use_fft,
                                       struct FraclabGrid **out);

/**
 * Riemann–Liouville derivative of order `alpha ∈ (0, 1)`.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_rl_derivative(const struct FraclabGrid *grid,
                                         double alpha,
                                         struct FraclabGrid **out);

/**
 * Caputo derivative, with `f'` estimated from the samples.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_caputo_derivative(const struct FraclabGrid *grid,
                                             double alpha,
                                             struct FraclabGrid **out);

/**
 * `||f||_p` over the grid interval; `p` may be infinite.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_lp_norm(const struct FraclabGrid *grid, double p, double *out);

/**
 * Weak quasi-norm `sup_r r μ{|f| > r}^{1/p}`.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_weak_norm(const struct FraclabGrid *grid, double p, double *out);

/**
 * Distribution function `μ{t : |f(t)| > r}` for `r > 0`.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_distribution(const struct FraclabGrid *grid, double r, double *out);

/**
 * `ln Γ(x)` for `x > 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FraclabStatus fraclab_log_gamma(double x, double *out);

/**
 * Weak-type constant `K_{α,p}`, defined for `0 < α < 1/p`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FraclabStatus fraclab_weak_constant(double alpha, double p, double *out);

/**
 * Strong-type constant `C_{α,p}` from the default interpolation search, `1 < p < 1/α`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FraclabStatus fraclab_strong_constant(double alpha, double p, double *out);

/**
 * Checks the weak-type inequality for one function.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_verify_weak(const struct FraclabGrid *grid,
                                       double alpha,
                                       double p,
                                       struct FraclabBoundReport *out);

/**
 * Checks the strong-type inequality into `L^q` for one function.
 *
 * # Safety
 * `grid` must be a live handle and `out` writable.
 */
enum FraclabStatus fraclab_verify_strong(const struct FraclabGrid *grid,
                                         double alpha,
                                         double p,
                                         double q,
                                         struct FraclabBoundReport *out);

/**
 * Separation of `J^α f_n` and `J^α f_m` in the critical space on `[t0, t1]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FraclabStatus fraclab_noncompact_gap(uint32_t n,
                                          uint32_t m,
                                          double alpha,
                                          double p,
                                          double t0,
                                          double t1,
                                          struct FraclabGapReport *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FRACLAB_H */
