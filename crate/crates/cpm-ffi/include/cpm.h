#ifndef CPM_H
#define CPM_H

/* This file is generated by cbindgen from cpm-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Smoothing strategy of the V-cycle.
typedef enum CpmSmoother {
  // Jacobi on the shifted Laplacian, each sweep followed by a
  // closest-point extension.
  CPM_SMOOTHER_RUUTH_MERRIMAN = 0,
  // Jacobi on the full system with the modified residual.
  CPM_SMOOTHER_STANDARD = 1,
} CpmSmoother;

// Result code of every FFI call.
typedef enum CpmStatus {
  CPM_STATUS_OK = 0,
  CPM_STATUS_NULL_POINTER = 1,
  CPM_STATUS_INVALID_ARGUMENT = 2,
  CPM_STATUS_UNKNOWN_PROBLEM = 3,
  CPM_STATUS_GEOMETRY_FAILURE = 4,
  CPM_STATUS_SINGULAR_SYSTEM = 5,
  // The V-cycle budget ran out before the stopping rule fired; the
  // solution handle still holds the last iterate.
  CPM_STATUS_NOT_CONVERGED = 6,
  CPM_STATUS_RUNTIME_ERROR = 7,
} CpmStatus;

// An instantiated test problem (opaque).
typedef struct CpmProblem CpmProblem;

// A solved system (opaque): band values plus diagnostics.
typedef struct CpmSolution CpmSolution;

// Multigrid controls; get defaults from [`cpm_mg_options_default`].
typedef struct CpmMgOptions {
  uint32_t nu1;
  uint32_t nu2;
  // Relative successive-change stopping threshold.
  double tol;
  uint32_t max_cycles;
  // Coarsest grid resolution N (coarsest dx = 1/N).
  uint32_t coarsest_n;
  enum CpmSmoother smoother;
} CpmMgOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread.  The pointer
// stays valid until the next failing call on the same thread.
const char *cpm_last_error_message(void);

// Create a named problem: `circle`, `bean`, `sphere_harmonic`, `torus`,
// `dziuk` or `sphere_varcoef`; `c` is the zeroth-order shift (1.0 is the
// standard configuration).
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum CpmStatus cpm_problem_create(const char *name, double c, struct CpmProblem **out);

// # Safety
// `problem` must come from [`cpm_problem_create`] and not already be freed.
void cpm_problem_free(struct CpmProblem *problem);

// Paper-standard multigrid controls: ν₁ = ν₂ = 3, tol = 1e-6, 50 cycles,
// coarsest N = 5, Ruuth–Merriman smoothing.
struct CpmMgOptions cpm_mg_options_default(void);

// Assemble the embedding system at spacing `dx` and solve it directly.
//
// # Safety
// `problem` must be a live handle; `out` must be valid.
enum CpmStatus cpm_solve_direct(const struct CpmProblem *problem,
                                double dx,
                                struct CpmSolution **out);

// Solve with the closest-point V-cycle.  `options` may be NULL for the
// defaults.  Returns `NotConverged` (with the last iterate in `out`) when
// the cycle budget runs out.
//
// # Safety
// `problem` must be a live handle; `out` must be valid; `options`, when
// non-NULL, must point to a valid struct.
enum CpmStatus cpm_solve_multigrid(const struct CpmProblem *problem,
                                   double dx,
                                   const struct CpmMgOptions *options,
                                   struct CpmSolution **out);

// # Safety
// `solution` must be a live handle; `out` must be valid.
enum CpmStatus cpm_solution_dofs(const struct CpmSolution *solution, size_t *out);

// Number of V-cycles taken (zero for direct solves).
//
// # Safety
// `solution` must be a live handle; `out` must be valid.
enum CpmStatus cpm_solution_cycles(const struct CpmSolution *solution, uint32_t *out);

// # Safety
// `solution` must be a live handle; `out` must be valid.
enum CpmStatus cpm_solution_converged(const struct CpmSolution *solution, bool *out);

// Relative ∞-norm surface error against the problem's exact solution.
//
// # Safety
// `solution` must be a live handle; `out` must be valid.
enum CpmStatus cpm_solution_surface_error(const struct CpmSolution *solution, double *out);

// Copy the band solution values into `buffer`.  Pass a NULL buffer to
// query the required length through `written`.
//
// # Safety
// `solution` must be a live handle; `buffer`, when non-NULL, must hold
// `len` doubles; `written` must be valid.
enum CpmStatus cpm_solution_values(const struct CpmSolution *solution,
                                   double *buffer,
                                   size_t len,
                                   size_t *written);

// # Safety
// `solution` must come from a solve call and not already be freed.
void cpm_solution_free(struct CpmSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPM_H */
