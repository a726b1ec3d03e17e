//! C interface to `shockvar`.
//!
//! Models and solutions are opaque heap handles created by `sv_*_new`-style
//! constructors and released with the matching `*_free`. Every fallible call
//! returns an [`SvStatus`]; on failure [`sv_last_error`] holds a message for
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use shockvar::lagrangian_maps::calibrate_lambda;
use shockvar::rh::{dissipation_rate, hugoniot_solve_barotropic, hugoniot_solve_full, rh_residuals};
use shockvar::shock1d::{energy_rate, length_rate, volume_potential_mismatch};
use shockvar::{Domain, Error, FluidState, GasModel, PiecewiseShockSolution, ShockJump};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Numerical = 3,
    OutOfDomain = 4,
    Panic = 5,
}

/// Fluid state. `s` is read only when `has_entropy` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvState {
    pub rho: f64,
    pub u: f64,
    pub s: f64,
    pub has_entropy: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvResidual {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub entropy_var: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvShock {
    pub u_right: f64,
    /// Downstream entropy density; zero for barotropic models.
    pub s_right: f64,
    pub speed: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvMismatch {
    pub de_dt: f64,
    pub neg_dv_dt: f64,
    pub gap: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvLambda {
    pub left: f64,
    pub right: f64,
}

/// Opaque equation-of-state handle.
pub struct SvModel {
    inner: GasModel,
}

/// Opaque piecewise-constant shock solution handle.
pub struct SvSolution {
    inner: PiecewiseShockSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(error: &Error) -> SvStatus {
    match error {
        Error::OutOfDomain { .. } | Error::OnShock { .. } => SvStatus::OutOfDomain,
        e if e.is_numerical() => SvStatus::Numerical,
        _ => SvStatus::InvalidInput,
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (SvStatus, String)>>(body: F) -> SvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SvStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SvStatus::Panic
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (SvStatus, String)>;
}

impl<T> Lift<T> for shockvar::Result<T> {
    fn lift(self) -> Result<T, (SvStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (SvStatus, String)> {
    p.as_ref().ok_or_else(|| (SvStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn write<T>(p: *mut T, value: T, name: &str) -> Result<(), (SvStatus, String)> {
    if p.is_null() {
        return Err((SvStatus::NullPointer, format!("`{name}` is null")));
    }
    p.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], (SvStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err((SvStatus::NullPointer, format!("`{name}` is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

impl From<SvState> for FluidState {
    fn from(s: SvState) -> Self {
        FluidState { rho: s.rho, u: s.u, s: s.has_entropy.then_some(s.s) }
    }
}

impl From<FluidState> for SvState {
    fn from(s: FluidState) -> Self {
        SvState { rho: s.rho, u: s.u, s: s.s.unwrap_or(0.0), has_entropy: s.s.is_some() }
    }
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread; empty if none failed.
#[no_mangle]
pub extern "C" fn sv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sv_status_message(status: SvStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        SvStatus::Ok => b"ok\0",
        SvStatus::NullPointer => b"null pointer argument\0",
        SvStatus::InvalidInput => b"invalid input\0",
        SvStatus::Numerical => b"numerical failure\0",
        SvStatus::OutOfDomain => b"query outside the solution domain\0",
        SvStatus::Panic => b"internal panic\0",
    };
    text.as_ptr().cast()
}

unsafe fn new_model(model: shockvar::Result<GasModel>, out: *mut *mut SvModel) -> SvStatus {
    guard(|| {
        let inner = model.lift()?;
        write(out, Box::into_raw(Box::new(SvModel { inner })), "out")
    })
}

/// Polytrope `p = k rho^gamma`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_model_barotropic(k: f64, gamma: f64, out: *mut *mut SvModel) -> SvStatus {
    new_model(GasModel::barotropic(k, gamma), out)
}

/// Ideal gas with specific energy `e_ref rho^(gamma-1) exp(S / c_v)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_model_ideal_gas(gamma: f64, e_ref: f64, c_v: f64, out: *mut *mut SvModel) -> SvStatus {
    new_model(GasModel::ideal_gas(gamma, e_ref, c_v), out)
}

/// # Safety
/// `model` must come from an `sv_model_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sv_model_free(model: *mut SvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

type Scalar = fn(&GasModel, &FluidState) -> shockvar::Result<f64>;

unsafe fn model_scalar(model: *const SvModel, state: *const SvState, out: *mut f64, f: Scalar) -> SvStatus {
    guard(|| {
        let model = &deref(model, "model")?.inner;
        let state = FluidState::from(*deref(state, "state")?);
        write(out, f(model, &state).lift()?, "out")
    })
}

/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_pressure(model: *const SvModel, state: *const SvState, out: *mut f64) -> SvStatus {
    model_scalar(model, state, out, GasModel::pressure)
}

/// Total energy density `rho u^2 / 2 + eps`.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_energy_density(model: *const SvModel, state: *const SvState, out: *mut f64) -> SvStatus {
    model_scalar(model, state, out, GasModel::energy_density)
}

/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_sound_speed(model: *const SvModel, state: *const SvState, out: *mut f64) -> SvStatus {
    model_scalar(model, state, out, GasModel::sound_speed)
}

unsafe fn jump(
    left: *const SvState,
    right: *const SvState,
    normal: f64,
    speed: f64,
) -> Result<ShockJump, (SvStatus, String)> {
    let (l, r) = (*deref(left, "left")?, *deref(right, "right")?);
    ShockJump::new(l.into(), r.into(), normal, speed).lift()
}

/// Jump residuals `v [[U]] n - [[F]] n` for the interface with unit normal
/// `normal` (+1 or -1) moving at `speed`.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_rh_residuals(
    model: *const SvModel,
    left: *const SvState,
    right: *const SvState,
    normal: f64,
    speed: f64,
    out: *mut SvResidual,
) -> SvStatus {
    guard(|| {
        let model = &deref(model, "model")?.inner;
        let r = rh_residuals(&jump(left, right, normal, speed)?, model).lift()?;
        write(out, SvResidual { mass: r.mass, momentum: r.momentum, energy: r.energy, entropy_var: r.entropy_var }, "out")
    })
}

/// Interface energy dissipation rate, non-positive for admissible shocks.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_dissipation_rate(
    model: *const SvModel,
    left: *const SvState,
    right: *const SvState,
    normal: f64,
    speed: f64,
    out: *mut f64,
) -> SvStatus {
    guard(|| {
        let model = &deref(model, "model")?.inner;
        write(out, dissipation_rate(&jump(left, right, normal, speed)?, model).lift()?, "out")
    })
}

/// Admissible shock from `left` to density `rho_right`. Dispatches on the
/// model: barotropic models solve mass and momentum, ideal gases also
/// energy.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_hugoniot_solve(
    model: *const SvModel,
    left: *const SvState,
    rho_right: f64,
    out: *mut SvShock,
) -> SvStatus {
    guard(|| {
        let model = &deref(model, "model")?.inner;
        let left = FluidState::from(*deref(left, "left")?);
        let shock = if model.is_barotropic() {
            let s = hugoniot_solve_barotropic(&left, rho_right, model).lift()?;
            SvShock { u_right: s.u_right, s_right: 0.0, speed: s.speed }
        } else {
            let s = hugoniot_solve_full(&left, rho_right, model).lift()?;
            SvShock { u_right: s.u_right, s_right: s.s_right, speed: s.speed }
        };
        write(out, shock, "out")
    })
}

fn new_solution(sol: PiecewiseShockSolution) -> *mut SvSolution {
    Box::into_raw(Box::new(SvSolution { inner: sol }))
}

/// Stationary two-state example on `[-1, 1]`: `(rho, u) = (1, 2) | (2, 1)`
/// with `K = 2 / (2^gamma - 1)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_solution_example(gamma: f64, out: *mut *mut SvSolution) -> SvStatus {
    guard(|| write(out, new_solution(PiecewiseShockSolution::stationary_example(gamma).lift()?), "out"))
}

/// Piecewise-constant solution with `shock_count + 1` states. Shock speeds
/// are validated against the jump conditions.
///
/// # Safety
/// `states` must hold `shock_count + 1` entries, `positions` and `speeds`
/// `shock_count` entries; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_solution_new(
    model: *const SvModel,
    states: *const SvState,
    positions: *const f64,
    speeds: *const f64,
    shock_count: usize,
    x_left: f64,
    x_right: f64,
    free_boundary: bool,
    out: *mut *mut SvSolution,
) -> SvStatus {
    guard(|| {
        let model = deref(model, "model")?.inner;
        let states = slice(states, shock_count + 1, "states")?.iter().map(|&s| s.into()).collect();
        let positions = slice(positions, shock_count, "positions")?.to_vec();
        let speeds = slice(speeds, shock_count, "speeds")?.to_vec();
        let domain = if free_boundary { Domain::free(x_left, x_right) } else { Domain::fixed(x_left, x_right) };
        let sol = PiecewiseShockSolution::new(model, states, positions, speeds, domain).lift()?;
        write(out, new_solution(sol), "out")
    })
}

/// # Safety
/// `solution` must come from an `sv_solution_*` constructor and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn sv_solution_free(solution: *mut SvSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// State at `(t, x)`.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_solution_evaluate(
    solution: *const SvSolution,
    t: f64,
    x: f64,
    out: *mut SvState,
) -> SvStatus {
    guard(|| {
        let sol = &deref(solution, "solution")?.inner;
        write(out, sol.evaluate(t, x).lift()?.into(), "out")
    })
}

/// Interface energy rate `dE/dt`.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_energy_rate(solution: *const SvSolution, out: *mut f64) -> SvStatus {
    guard(|| write(out, energy_rate(&deref(solution, "solution")?.inner).lift()?, "out"))
}

/// Rate of change of the material length between the outer states.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_length_rate(solution: *const SvSolution, out: *mut f64) -> SvStatus {
    guard(|| write(out, length_rate(&deref(solution, "solution")?.inner), "out"))
}

/// Energy rate against the unit-density volume potential rate.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_volume_mismatch(solution: *const SvSolution, out: *mut SvMismatch) -> SvStatus {
    guard(|| {
        let m = volume_potential_mismatch(&deref(solution, "solution")?.inner).lift()?;
        write(out, SvMismatch { de_dt: m.de_dt, neg_dv_dt: m.neg_dv_dt, gap: m.gap }, "out")
    })
}

/// Piecewise-constant lambda with the left value fixed to zero, chosen so the
/// augmented energy is conserved across the single shock.
///
/// # Safety
/// Pointers must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sv_calibrate_lambda(solution: *const SvSolution, out: *mut SvLambda) -> SvStatus {
    guard(|| {
        let (left, right) = calibrate_lambda(&deref(solution, "solution")?.inner).lift()?;
        write(out, SvLambda { left, right }, "out")
    })
}
