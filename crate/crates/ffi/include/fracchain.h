#ifndef FRACCHAIN_H
#define FRACCHAIN_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_POINTER = 1,
  // Bad argument, parameter file or configuration.
  FC_STATUS_INVALID_ARGUMENT = 2,
  // The integration blew up.
  FC_STATUS_DIVERGED = 3,
  // A series or fit failed numerically.
  FC_STATUS_NUMERICAL = 4,
  // The parameters admit no feasible interior equilibrium.
  FC_STATUS_NO_INTERIOR = 5,
  FC_STATUS_IO = 6,
  // A Rust panic was caught at the boundary.
  FC_STATUS_INTERNAL = 7,
} FcStatus;

typedef enum FcEquilibriumKind {
  FC_EQUILIBRIUM_KIND_TRIVIAL = 0,
  FC_EQUILIBRIUM_KIND_AXIAL = 1,
  FC_EQUILIBRIUM_KIND_PLANAR = 2,
  FC_EQUILIBRIUM_KIND_INTERIOR = 3,
} FcEquilibriumKind;

typedef enum FcVerdict {
  FC_VERDICT_STABLE = 0,
  FC_VERDICT_UNSTABLE = 1,
  FC_VERDICT_NON_HYPERBOLIC = 2,
  FC_VERDICT_INCONCLUSIVE = 3,
} FcVerdict;

// Opaque list of equilibria.
typedef struct FcEquilibria FcEquilibria;

// Opaque parameter set (dimensional).
typedef struct FcParams FcParams;

// Opaque simulation result.
typedef struct FcTrajectory FcTrajectory;

typedef struct FcState {
  double x;
  double y;
  double z;
} FcState;

// One equilibrium. `dim` is meaningful only when `has_dim` is true.
typedef struct FcEquilibrium {
  enum FcEquilibriumKind kind;
  struct FcState nondim;
  struct FcState dim;
  bool has_dim;
  bool existence_ok;
} FcEquilibrium;

// Local stability of the interior equilibrium at one order.
typedef struct FcStability {
  enum FcVerdict verdict;
  double eig_re[3];
  double eig_im[3];
  double a1;
  double a2;
  double a3;
  double discriminant;
  // Coefficient case 1..=4, or 0 when none applies.
  int32_t coefficient_case;
} FcStability;

typedef struct FcGlobal {
  double cond1;
  double cond2;
  double cond3;
  double alpha;
  bool all_satisfied;
  // Interior equilibrium the conditions were evaluated at (nondimensional).
  struct FcState equilibrium;
} FcGlobal;

typedef struct FcBounds {
  double lhs;
  double rhs;
  bool satisfied;
  double alpha;
  double beta;
} FcBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *fc_last_error_message(void);

// Static, NUL-terminated library version.
const char *fc_version(void);

// Built-in parameter set `n` in 1..=5.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum FcStatus fc_params_example(uint32_t n, struct FcParams **out);

// Reads a `name = value` parameter file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` a valid pointer.
enum FcStatus fc_params_from_file(const char *path, struct FcParams **out);

// Parses parameter-file text held in memory.
//
// # Safety
// `text` must be a NUL-terminated string; `out` a valid pointer.
enum FcStatus fc_params_parse(const char *text, struct FcParams **out);

// # Safety
// `params` must be NULL or a handle from this library, not yet freed.
void fc_params_free(struct FcParams *params);

// Reads one parameter by name (`a0`, `b0`, `v0` … `c3`).
//
// # Safety
// Pointers must be valid; `name` NUL-terminated.
enum FcStatus fc_params_get(const struct FcParams *params, const char *name, double *out);

// Sets one parameter by name; the value must keep the set valid.
//
// # Safety
// Pointers must be valid; `name` NUL-terminated.
enum FcStatus fc_params_set(struct FcParams *params, const char *name, double value);

// Integrates the dimensional system from `init` over `[0, t_final]`.
// `window_length <= 0` selects full memory.
//
// # Safety
// `params` must be a live handle; `out` a valid pointer.
enum FcStatus fc_simulate(const struct FcParams *params,
                          double order,
                          struct FcState init,
                          double t_final,
                          double step,
                          double window_length,
                          struct FcTrajectory **out);

// Number of grid points (including `t = 0`); 0 for NULL.
//
// # Safety
// `traj` must be NULL or a live handle.
size_t fc_trajectory_len(const struct FcTrajectory *traj);

// Borrowed pointer to `len` grid times, valid while the handle lives.
//
// # Safety
// `traj` must be NULL or a live handle.
const double *fc_trajectory_times(const struct FcTrajectory *traj);

// Borrowed pointer to `3 * len` values, row-major `(x, y, z)` per grid point.
//
// # Safety
// `traj` must be NULL or a live handle.
const double *fc_trajectory_states(const struct FcTrajectory *traj);

// # Safety
// Pointers must be valid.
enum FcStatus fc_trajectory_final_state(const struct FcTrajectory *traj, struct FcState *out);

// Grid points with a component below the non-negativity tolerance.
//
// # Safety
// `traj` must be NULL or a live handle.
size_t fc_trajectory_negativity_count(const struct FcTrajectory *traj);

// # Safety
// `traj` must be NULL or a handle from this library, not yet freed.
void fc_trajectory_free(struct FcTrajectory *traj);

// All feasible equilibria, interior points last.
//
// # Safety
// `params` must be a live handle; `out` a valid pointer.
enum FcStatus fc_equilibria(const struct FcParams *params, struct FcEquilibria **out);

// # Safety
// `eqs` must be NULL or a live handle.
size_t fc_equilibria_len(const struct FcEquilibria *eqs);

// # Safety
// Pointers must be valid.
enum FcStatus fc_equilibria_get(const struct FcEquilibria *eqs,
                                size_t index,
                                struct FcEquilibrium *out);

// # Safety
// `eqs` must be NULL or a handle from this library, not yet freed.
void fc_equilibria_free(struct FcEquilibria *eqs);

// Classifies the first feasible interior equilibrium at order `order`.
//
// # Safety
// `params` must be a live handle; `out` a valid pointer.
enum FcStatus fc_classify_interior(const struct FcParams *params,
                                   double order,
                                   struct FcStability *out);

// Global-stability conditions at the interior equilibrium.
//
// # Safety
// `params` must be a live handle; `out` a valid pointer.
enum FcStatus fc_global_check(const struct FcParams *params, struct FcGlobal *out);

// Boundedness (absorbing-region) hypothesis check.
//
// # Safety
// `params` must be a live handle; `out` a valid pointer.
enum FcStatus fc_bounds_check(const struct FcParams *params, struct FcBounds *out);

// One-parameter Mittag-Leffler function `E_m(z)`.
//
// # Safety
// `out` must be a valid pointer.
enum FcStatus fc_mittag_leffler(double m, double z, double *out);

// Gamma function for `x > 0`.
//
// # Safety
// `out` must be a valid pointer.
enum FcStatus fc_gamma(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACCHAIN_H */
