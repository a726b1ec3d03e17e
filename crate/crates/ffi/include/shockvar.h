/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SHOCKVAR_H
#define SHOCKVAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SvStatus {
  SV_STATUS_OK = 0,
  SV_STATUS_NULL_POINTER = 1,
  SV_STATUS_INVALID_INPUT = 2,
  SV_STATUS_NUMERICAL = 3,
  SV_STATUS_OUT_OF_DOMAIN = 4,
  SV_STATUS_PANIC = 5,
} SvStatus;

/**
 * Opaque equation-of-state handle.
 */
typedef struct SvModel SvModel;

/**
 * Opaque piecewise-constant shock solution handle.
 */
typedef struct SvSolution SvSolution;

/**
 * Fluid state. `s` is read only when `has_entropy` is true.
 */
typedef struct SvState {
  double rho;
  double u;
  double s;
  bool has_entropy;
} SvState;

typedef struct SvResidual {
  double mass;
  double momentum;
  double energy;
  double entropy_var;
} SvResidual;

typedef struct SvShock {
  double u_right;
  /**
   * Downstream entropy density; zero for barotropic models.
   */
  double s_right;
  double speed;
} SvShock;

typedef struct SvMismatch {
  double de_dt;
  double neg_dv_dt;
  double gap;
} SvMismatch;

typedef struct SvLambda {
  double left;
  double right;
} SvLambda;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Valid until the next
 * failing call on the same thread; empty if none failed.
 */
const char *sv_last_error(void);

/**
 * Static description of a status code.
 */
const char *sv_status_message(enum SvStatus status);

/**
 * Polytrope `p = k rho^gamma`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SvStatus sv_model_barotropic(double k, double gamma, struct SvModel **out);

/**
 * Ideal gas with specific energy `e_ref rho^(gamma-1) exp(S / c_v)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SvStatus sv_model_ideal_gas(double gamma, double e_ref, double c_v, struct SvModel **out);

/**
 * # Safety
 * `model` must come from an `sv_model_*` constructor and not be freed twice.
 */
void sv_model_free(struct SvModel *model);

/**
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_pressure(const struct SvModel *model, const struct SvState *state, double *out);

/**
 * Total energy density `rho u^2 / 2 + eps`.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_energy_density(const struct SvModel *model,
                                const struct SvState *state,
                                double *out);

/**
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_sound_speed(const struct SvModel *model, const struct SvState *state, double *out);

/**
 * Jump residuals `v [[U]] n - [[F]] n` for the interface with unit normal
 * `normal` (+1 or -1) moving at `speed`.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_rh_residuals(const struct SvModel *model,
                              const struct SvState *left,
                              const struct SvState *right,
                              double normal,
                              double speed,
                              struct SvResidual *out);

/**
 * Interface energy dissipation rate, non-positive for admissible shocks.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_dissipation_rate(const struct SvModel *model,
                                  const struct SvState *left,
                                  const struct SvState *right,
                                  double normal,
                                  double speed,
                                  double *out);

/**
 * Admissible shock from `left` to density `rho_right`. Dispatches on the
 * model: barotropic models solve mass and momentum, ideal gases also
 * energy.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_hugoniot_solve(const struct SvModel *model,
                                const struct SvState *left,
                                double rho_right,
                                struct SvShock *out);

/**
 * Stationary two-state example on `[-1, 1]`: `(rho, u) = (1, 2) | (2, 1)`
 * with `K = 2 / (2^gamma - 1)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SvStatus sv_solution_example(double gamma, struct SvSolution **out);

/**
 * Piecewise-constant solution with `shock_count + 1` states. Shock speeds
 * are validated against the jump conditions.
 *
 * # Safety
 * `states` must hold `shock_count + 1` entries, `positions` and `speeds`
 * `shock_count` entries; `out` must be valid for writes.
 */
enum SvStatus sv_solution_new(const struct SvModel *model,
                              const struct SvState *states,
                              const double *positions,
                              const double *speeds,
                              size_t shock_count,
                              double x_left,
                              double x_right,
                              bool free_boundary,
                              struct SvSolution **out);

/**
 * # Safety
 * `solution` must come from an `sv_solution_*` constructor and not be
 * freed twice.
 */
void sv_solution_free(struct SvSolution *solution);

/**
 * State at `(t, x)`.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_solution_evaluate(const struct SvSolution *solution,
                                   double t,
                                   double x,
                                   struct SvState *out);

/**
 * Interface energy rate `dE/dt`.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_energy_rate(const struct SvSolution *solution, double *out);

/**
 * Rate of change of the material length between the outer states.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_length_rate(const struct SvSolution *solution, double *out);

/**
 * Energy rate against the unit-density volume potential rate.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_volume_mismatch(const struct SvSolution *solution, struct SvMismatch *out);

/**
 * Piecewise-constant lambda with the left value fixed to zero, chosen so the
 * augmented energy is conserved across the single shock.
 *
 * # Safety
 * Pointers must be valid; `out` must be valid for writes.
 */
enum SvStatus sv_calibrate_lambda(const struct SvSolution *solution, struct SvLambda *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHOCKVAR_H */
