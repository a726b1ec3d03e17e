//! First-order finite-volume oracle: HLL fluxes with Davis wave-speed
//! estimates, forward Euler in time, and shock extraction from the captured
//! profile.

use serde::{Deserialize, Serialize};

use crate::eos::{FluidState, GasModel};
use crate::error::{Error, Result};
use crate::rh::{rh_residuals, RhResidual, ShockJump};
use crate::shock1d::PiecewiseShockSolution;

/// Conserved cell average `(rho, rho u, E)`. The last slot is unused for the
/// barotropic model.
pub type Conserved = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_left: f64,
    pub x_right: f64,
    pub cells: usize,
}

impl Grid1D {
    pub fn new(x_left: f64, x_right: f64, cells: usize) -> Result<Self> {
        let grid = Grid1D { x_left, x_right, cells };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells < 4 {
            return Err(Error::InvalidGrid(format!("need at least 4 cells, got {}", self.cells)));
        }
        if !(self.x_left.is_finite() && self.x_right.is_finite() && self.x_right > self.x_left) {
            return Err(Error::InvalidGrid(format!("bad interval [{}, {}]", self.x_left, self.x_right)));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    #[default]
    Outflow,
    Periodic,
}

pub fn conserved(model: &GasModel, state: &FluidState) -> Result<Conserved> {
    let energy = if model.is_barotropic() { 0.0 } else { model.energy_density(state)? };
    Ok([state.rho, state.momentum(), energy])
}

pub fn primitive(model: &GasModel, u: &Conserved) -> Result<FluidState> {
    model.state_from_conserved(u[0], u[1], u[2])
}

/// Physical flux `(rho u, rho u^2 + p, (E + p) u)`.
pub fn flux(model: &GasModel, u: &Conserved) -> Result<Conserved> {
    let state = primitive(model, u)?;
    Ok(flux_of(model, &state, u)?.0)
}

fn flux_of(model: &GasModel, state: &FluidState, u: &Conserved) -> Result<(Conserved, f64)> {
    let p = model.pressure(state)?;
    let c = model.sound_speed(state)?;
    let energy_flux = if model.is_barotropic() { 0.0 } else { (u[2] + p) * state.u };
    Ok(([u[1], u[1] * state.u + p, energy_flux], c))
}

fn hll(model: &GasModel, ul: &Conserved, ur: &Conserved, cell: usize) -> Result<(Conserved, f64)> {
    let wrap = |e: Error| Error::SolverFailure { cell, reason: e.to_string() };
    let sl_state = primitive(model, ul).map_err(wrap)?;
    let sr_state = primitive(model, ur).map_err(wrap)?;
    let (fl, cl) = flux_of(model, &sl_state, ul).map_err(wrap)?;
    let (fr, cr) = flux_of(model, &sr_state, ur).map_err(wrap)?;
    let s_left = (sl_state.u - cl).min(sr_state.u - cr);
    let s_right = (sl_state.u + cl).max(sr_state.u + cr);
    let speed = s_left.abs().max(s_right.abs());
    if s_left >= 0.0 {
        return Ok((fl, speed));
    }
    if s_right <= 0.0 {
        return Ok((fr, speed));
    }
    let mut f = [0.0; 3];
    for k in 0..3 {
        f[k] = (s_right * fl[k] - s_left * fr[k] + s_left * s_right * (ur[k] - ul[k])) / (s_right - s_left);
    }
    Ok((f, speed))
}

/// Interface fluxes `F_{i-1/2}` for `i = 0..=n` and the largest wave speed.
fn interface_fluxes(
    model: &GasModel,
    field: &[Conserved],
    boundary: Boundary,
) -> Result<(Vec<Conserved>, f64)> {
    let n = field.len();
    let mut fluxes = Vec::with_capacity(n + 1);
    let mut max_speed = 0.0_f64;
    for i in 0..=n {
        let (left, right) = match boundary {
            Boundary::Outflow => (&field[i.saturating_sub(1)], &field[i.min(n - 1)]),
            Boundary::Periodic => (&field[(i + n - 1) % n], &field[i % n]),
        };
        let (f, s) = hll(model, left, right, i.min(n - 1))?;
        max_speed = max_speed.max(s);
        fluxes.push(f);
    }
    Ok((fluxes, max_speed))
}

fn apply(field: &[Conserved], fluxes: &[Conserved], ratio: f64) -> Vec<Conserved> {
    field
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let mut next = *u;
            for k in 0..3 {
                next[k] -= ratio * (fluxes[i + 1][k] - fluxes[i][k]);
            }
            next
        })
        .collect()
}

/// One forward-Euler step at the CFL-limited time step.
pub fn step(
    model: &GasModel,
    grid: &Grid1D,
    field: &[Conserved],
    cfl: f64,
    boundary: Boundary,
) -> Result<(Vec<Conserved>, f64)> {
    step_limited(model, grid, field, cfl, boundary, f64::INFINITY).map(|(f, dt, _)| (f, dt))
}

fn step_limited(
    model: &GasModel,
    grid: &Grid1D,
    field: &[Conserved],
    cfl: f64,
    boundary: Boundary,
    max_dt: f64,
) -> Result<(Vec<Conserved>, f64, [Conserved; 2])> {
    if field.len() != grid.cells {
        return Err(Error::InvalidGrid(format!("{} values on {} cells", field.len(), grid.cells)));
    }
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidGrid(format!("CFL number {cfl} outside (0, 1]")));
    }
    let (fluxes, speed) = interface_fluxes(model, field, boundary)?;
    if !(speed.is_finite() && speed > 0.0) {
        return Err(Error::SolverFailure { cell: 0, reason: format!("wave speed {speed}") });
    }
    let dt = (cfl * grid.dx() / speed).min(max_dt);
    let next = apply(field, &fluxes, dt / grid.dx());
    for (i, u) in next.iter().enumerate() {
        if !(u[0].is_finite() && u[0] > 0.0) {
            return Err(Error::SolverFailure { cell: i, reason: format!("density {}", u[0]) });
        }
    }
    Ok((next, dt, [fluxes[0], fluxes[grid.cells]]))
}

/// Exact cell averages of a piecewise-constant solution at time `t`.
pub fn project(sol: &PiecewiseShockSolution, grid: &Grid1D, t: f64) -> Result<Vec<Conserved>> {
    let model = sol.model();
    let values: Vec<Conserved> = sol.states().iter().map(|s| conserved(model, s)).collect::<Result<_>>()?;
    let shocks: Vec<f64> = (0..sol.shock_count()).map(|i| sol.shock_position(i, t)).collect();
    let dx = grid.dx();
    let mut field = Vec::with_capacity(grid.cells);
    for i in 0..grid.cells {
        let (a, b) = (grid.x_left + i as f64 * dx, grid.x_left + (i + 1) as f64 * dx);
        let mut avg = [0.0; 3];
        for (region, value) in values.iter().enumerate() {
            let lo = if region == 0 { a } else { a.max(shocks[region - 1]) };
            let hi = if region == shocks.len() { b } else { b.min(shocks[region]) };
            if lo == a && hi == b {
                avg = *value;
            } else if hi > lo {
                for k in 0..3 {
                    avg[k] += value[k] * (hi - lo) / dx;
                }
            }
        }
        field.push(avg);
    }
    Ok(field)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FvOptions {
    pub cfl: f64,
    pub t_final: f64,
    pub boundary: Boundary,
    /// Number of equally spaced snapshots after the initial one.
    pub snapshots: usize,
    pub max_steps: usize,
}

impl Default for FvOptions {
    fn default() -> Self {
        FvOptions { cfl: 0.9, t_final: 0.5, boundary: Boundary::Outflow, snapshots: 10, max_steps: 10_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct FvRun {
    pub grid: Grid1D,
    pub snapshots: Vec<(f64, Vec<Conserved>)>,
    pub steps: usize,
    /// Largest relative change of `sum U dx + int (F_out - F_in) dt`.
    pub conservation_drift: f64,
}

impl FvRun {
    pub fn final_field(&self) -> &[Conserved] {
        &self.snapshots.last().expect("initial snapshot").1
    }

    pub fn final_time(&self) -> f64 {
        self.snapshots.last().expect("initial snapshot").0
    }
}

pub fn run(model: &GasModel, grid: &Grid1D, initial: Vec<Conserved>, options: &FvOptions) -> Result<FvRun> {
    grid.validate()?;
    if !(options.t_final >= 0.0 && options.t_final.is_finite()) {
        return Err(Error::InvalidGrid(format!("final time {}", options.t_final)));
    }
    let dx = grid.dx();
    let totals = |f: &[Conserved]| {
        let mut q = [0.0; 3];
        for u in f {
            for k in 0..3 {
                q[k] += u[k] * dx;
            }
        }
        q
    };
    let initial_total = totals(&initial);
    let mut outflow = [0.0; 3];
    let mut drift = 0.0_f64;
    let count = options.snapshots.max(1);
    let marks: Vec<f64> = (1..=count).map(|j| options.t_final * j as f64 / count as f64).collect();
    let mut snapshots = vec![(0.0, initial.clone())];
    let mut field = initial;
    let mut t = 0.0;
    let mut steps = 0;
    for &mark in &marks {
        while t < mark {
            if steps >= options.max_steps {
                return Err(Error::NonConvergence { iterations: steps, residual: mark - t });
            }
            let (next, dt, [f_in, f_out]) =
                step_limited(model, grid, &field, options.cfl, options.boundary, mark - t)?;
            field = next;
            t = if mark - t - dt <= 1e-14 * mark.max(1.0) { mark } else { t + dt };
            steps += 1;
            if options.boundary == Boundary::Outflow {
                for k in 0..3 {
                    outflow[k] += dt * (f_out[k] - f_in[k]);
                }
            }
            let q = totals(&field);
            for k in 0..3 {
                let scale = initial_total[k].abs().max(1.0);
                drift = drift.max((q[k] + outflow[k] - initial_total[k]).abs() / scale);
            }
        }
        snapshots.push((t, field.clone()));
    }
    log::debug!("finite-volume run finished after {steps} steps");
    Ok(FvRun { grid: *grid, snapshots, steps, conservation_drift: drift })
}

/// Captured discontinuity in one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockEstimate {
    pub position: f64,
    pub cell: usize,
    pub left: FluidState,
    pub right: FluidState,
}

/// Cells between the steepest face and the sampled plateau states.
pub const SAMPLE_OFFSET: usize = 6;
/// Required ratio between the steepest density jump and any jump outside its
/// neighbourhood.
pub const ISOLATION_FACTOR: f64 = 5.0;

/// Locates the single isolated density discontinuity of a field.
pub fn locate_shock(model: &GasModel, grid: &Grid1D, field: &[Conserved]) -> Result<ShockEstimate> {
    let n = field.len();
    let k = SAMPLE_OFFSET;
    let grads: Vec<f64> = field.windows(2).map(|w| (w[1][0] - w[0][0]).abs()).collect();
    let (face, &peak) = grads
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::NoDiscontinuity("empty field".into()))?;
    let scale = field.iter().map(|u| u[0].abs()).fold(0.0, f64::max);
    if peak <= 1e-10 * scale {
        return Err(Error::NoDiscontinuity("density is flat".into()));
    }
    let rival = grads
        .iter()
        .enumerate()
        .filter(|(j, _)| j.abs_diff(face) > k)
        .map(|(_, g)| *g)
        .fold(0.0, f64::max);
    if rival * ISOLATION_FACTOR > peak {
        return Err(Error::NoDiscontinuity(format!(
            "steepest jump {peak:.3e} not isolated from {rival:.3e}"
        )));
    }
    if face < k || face + 1 + k >= n {
        return Err(Error::NoDiscontinuity("discontinuity too close to the boundary".into()));
    }
    let (il, ir) = (face - k, face + 1 + k);
    let left = primitive(model, &field[il])?;
    let right = primitive(model, &field[ir])?;
    let dx = grid.dx();
    let a = grid.x_left + il as f64 * dx;
    let b = grid.x_left + (ir + 1) as f64 * dx;
    let mass: f64 = field[il..=ir].iter().map(|u| u[0] * dx).sum();
    let position = if (left.rho - right.rho).abs() > 1e-14 * scale {
        ((mass - right.rho * b + left.rho * a) / (left.rho - right.rho)).clamp(a, b)
    } else {
        grid.x_left + (face + 1) as f64 * dx
    };
    Ok(ShockEstimate { position, cell: face, left, right })
}

/// Shock trajectory, fitted speed and Rankine-Hugoniot residuals of a run.
#[derive(Debug, Clone, Serialize)]
pub struct ShockMeasurement {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub speed: f64,
    pub jump: ShockJump,
    pub residuals: RhResidual,
}

/// Fits `x_s(t)` by least squares over the snapshots after `t_start` and
/// evaluates the residuals of the last captured jump at the fitted speed.
pub fn measure_shock(model: &GasModel, run: &FvRun, t_start: f64) -> Result<ShockMeasurement> {
    let mut times = Vec::new();
    let mut positions = Vec::new();
    let mut last = None;
    for (t, field) in run.snapshots.iter().filter(|(t, _)| *t >= t_start) {
        let estimate = locate_shock(model, &run.grid, field)?;
        times.push(*t);
        positions.push(estimate.position);
        last = Some(estimate);
    }
    let last = last.ok_or_else(|| Error::NoDiscontinuity("no snapshot after start time".into()))?;
    let speed = if times.len() >= 2 {
        let n = times.len() as f64;
        let tm = times.iter().sum::<f64>() / n;
        let xm = positions.iter().sum::<f64>() / n;
        let sxx: f64 = times.iter().map(|t| (t - tm).powi(2)).sum();
        let sxy: f64 = times.iter().zip(&positions).map(|(t, x)| (t - tm) * (x - xm)).sum();
        sxy / sxx
    } else {
        return Err(Error::NoDiscontinuity("need two snapshots to fit a speed".into()));
    };
    let jump = ShockJump::new(last.left, last.right, 1.0, speed)?;
    let residuals = rh_residuals(&jump, model)?;
    Ok(ShockMeasurement { times, positions, speed, jump, residuals })
}

/// `sum |rho_h - rho| dx` against the exact cell averages.
pub fn density_l1_error(sol: &PiecewiseShockSolution, grid: &Grid1D, field: &[Conserved], t: f64) -> Result<f64> {
    let exact = project(sol, grid, t)?;
    Ok(exact.iter().zip(field).map(|(e, h)| (e[0] - h[0]).abs() * grid.dx()).sum())
}
