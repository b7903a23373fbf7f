#ifndef NLS_FEM_H
#define NLS_FEM_H

/* Generated by cbindgen from crates/ffi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NlsStatus {
  NLS_STATUS_OK = 0,
  NLS_STATUS_NULL_POINTER = 1,
  NLS_STATUS_INVALID_ARGUMENT = 2,
  NLS_STATUS_UNKNOWN_CASE = 3,
  NLS_STATUS_SINGULAR_MATRIX = 4,
  NLS_STATUS_NON_FINITE = 5,
  NLS_STATUS_BUFFER_TOO_SMALL = 6,
  NLS_STATUS_NOT_RUN = 7,
  NLS_STATUS_PANIC = 8,
} NlsStatus;

typedef enum NlsCoupling {
  // k ∝ h
  NLS_COUPLING_K_PROP_H = 0,
  // k ∝ h^{r/2}
  NLS_COUPLING_K_PROP_HR2 = 1,
} NlsCoupling;

// Opaque solver handle.
typedef struct NlsSolver NlsSolver;

// Parameters of a single run.
typedef struct NlsRunParams {
  // Built-in case name, NUL-terminated: "ms1", "free1" or "zero".
  const char *case_name;
  uint32_t degree;
  // Element count.
  size_t m;
  size_t time_steps;
  // Interior time nodes jitter, fraction of the uniform step in [0, 0.5).
  double time_jitter;
  uint64_t seed;
  // Non-zero: replace the forcing by zero.
  uint8_t drop_forcing;
} NlsRunParams;

typedef struct NlsStepRecord {
  size_t n;
  double t;
  double l2_norm;
  double g_l2;
  double wall_time;
} NlsStepRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a solver for a built-in case on a uniform mesh.
//
// # Safety
// `params` must point to a valid [`NlsRunParams`] whose `case_name` is a
// NUL-terminated string; `out` must be writable.
enum NlsStatus nls_solver_new(const struct NlsRunParams *params, struct NlsSolver **out);

// Releases a solver. Passing null is a no-op.
//
// # Safety
// `solver` must come from [`nls_solver_new`] and not have been freed.
void nls_solver_free(struct NlsSolver *solver);

// Runs the full time march. May be called again; the result is replaced.
//
// # Safety
// `solver` must be a live handle.
enum NlsStatus nls_solver_advance(struct NlsSolver *solver);

// Number of free complex degrees of freedom.
//
// # Safety
// `solver` must be a live handle and `out` writable.
enum NlsStatus nls_solver_n_dof(const struct NlsSolver *solver, size_t *out);

// Number of time steps of the grid.
//
// # Safety
// `solver` must be a live handle and `out` writable.
enum NlsStatus nls_solver_step_count(const struct NlsSolver *solver, size_t *out);

// Record of step `index` (0-based, i.e. time level `index + 1`).
//
// # Safety
// `solver` must be a live handle and `out` writable.
enum NlsStatus nls_solver_step_record(const struct NlsSolver *solver,
                                      size_t index,
                                      struct NlsStepRecord *out);

// Copies the final coefficients into `re[0..len]`, `im[0..len]`; `len`
// must be at least the DOF count.
//
// # Safety
// `re` and `im` must be writable for `len` doubles.
enum NlsStatus nls_solver_solution(const struct NlsSolver *solver,
                                   double *re,
                                   double *im,
                                   size_t len);

// `max_n |‖U^n‖_M − ‖U^0‖_M|`.
//
// # Safety
// `solver` must be a live handle and `out` writable.
enum NlsStatus nls_solver_mass_drift(const struct NlsSolver *solver, double *out);

// Final-time L2 and H1-seminorm errors against the exact solution.
//
// # Safety
// `solver` must be a live handle; `err_l2`, `err_h1` writable.
enum NlsStatus nls_solver_errors(const struct NlsSolver *solver, double *err_l2, double *err_h1);

// Consistency residual norms for each of the `n` step sizes in `ks`, and
// the fitted log-log orders (NaN when a residual vanishes).
//
// # Safety
// `ks`, `r_half`, `r_full` must hold `n` doubles; the order pointers must be writable.
enum NlsStatus nls_consistency(const char *case_name,
                               const double *ks,
                               size_t n,
                               double t_base,
                               double *r_half,
                               double *r_full,
                               double *order_half,
                               double *order_full);

// Convergence study for one degree; writes the median L2 and H1 rates.
//
// # Safety
// `case_name` must be NUL-terminated; output pointers writable.
enum NlsStatus nls_convergence(const char *case_name,
                               uint32_t degree,
                               size_t levels,
                               size_t m0,
                               enum NlsCoupling coupling,
                               double time_jitter,
                               uint64_t seed,
                               double *median_l2,
                               double *median_h1);

// Copies the last error message of this thread into `buf` (truncated,
// always NUL-terminated when `len > 0`). Returns the full message length
// including the terminator.
//
// # Safety
// `buf` must be writable for `len` bytes, or null with `len == 0`.
size_t nls_last_error_message(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NLS_FEM_H */
