//! Exact piecewise-constant shock solutions in one space dimension and their
//! energy and length bookkeeping.

use serde::{Deserialize, Serialize};

use crate::eos::{FluidState, GasModel};
use crate::error::{Error, Result};
use crate::rh::{self, ShockJump};

/// Safety margin subtracted from the first shock-collision time.
pub const HORIZON_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMotion {
    /// Endpoints stay put.
    #[default]
    Fixed,
    /// Endpoints are material points advected with the adjacent fluid.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub x_left: f64,
    pub x_right: f64,
    #[serde(default)]
    pub motion: BoundaryMotion,
}

impl Domain {
    pub fn fixed(x_left: f64, x_right: f64) -> Self {
        Domain { x_left, x_right, motion: BoundaryMotion::Fixed }
    }

    pub fn free(x_left: f64, x_right: f64) -> Self {
        Domain { x_left, x_right, motion: BoundaryMotion::Free }
    }

    pub fn is_free(&self) -> bool {
        self.motion == BoundaryMotion::Free
    }
}

/// Serializable description of a piecewise-constant solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionSpec {
    pub states: Vec<FluidState>,
    pub shock_positions: Vec<f64>,
    /// Speeds are derived from the mass condition when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock_speeds: Option<Vec<f64>>,
    pub domain: Domain,
}

/// Piecewise-constant weak-solution candidate: `m + 1` states separated by
/// `m` straight shock trajectories `x_i(t) = x_i(0) + v_i t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseShockSolution {
    model: GasModel,
    states: Vec<FluidState>,
    positions: Vec<f64>,
    speeds: Vec<f64>,
    domain: Domain,
    validity: (f64, f64),
}

impl PiecewiseShockSolution {
    /// Builds a solution and checks every adjacent pair against the
    /// Rankine-Hugoniot conditions with the stored speed.
    pub fn new(
        model: GasModel,
        states: Vec<FluidState>,
        positions: Vec<f64>,
        speeds: Vec<f64>,
        domain: Domain,
    ) -> Result<Self> {
        let sol = Self::candidate(model, states, positions, speeds, domain)?;
        for i in 0..sol.shock_count() {
            let res = rh::rh_residuals(&sol.jump(i), &sol.model)?;
            if res.max_abs_conserved(&sol.model) >= rh::RESIDUAL_TOLERANCE {
                return Err(Error::InvalidSolution(format!(
                    "shock {i} violates the jump conditions (residual {:e})",
                    res.max_abs_conserved(&sol.model)
                )));
            }
        }
        Ok(sol)
    }

    /// Structural checks only; the jump conditions are not enforced. Used
    /// for audit inputs that are deliberately not weak solutions.
    pub fn candidate(
        model: GasModel,
        states: Vec<FluidState>,
        positions: Vec<f64>,
        speeds: Vec<f64>,
        domain: Domain,
    ) -> Result<Self> {
        model.validate()?;
        if states.len() != positions.len() + 1 || speeds.len() != positions.len() {
            return Err(Error::InvalidSolution(format!(
                "{} states, {} positions and {} speeds are inconsistent",
                states.len(),
                positions.len(),
                speeds.len()
            )));
        }
        for s in &states {
            model.check_state(s)?;
        }
        if positions.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSolution("shock positions must be strictly increasing".into()));
        }
        if positions.iter().chain(&speeds).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSolution("non-finite shock data".into()));
        }
        if !(domain.x_left < domain.x_right) {
            return Err(Error::InvalidSolution("domain must satisfy x_left < x_right".into()));
        }
        let validity = validity_window(&positions, &speeds);
        Ok(PiecewiseShockSolution { model, states, positions, speeds, domain, validity })
    }

    pub fn from_spec(model: GasModel, spec: &SolutionSpec) -> Result<Self> {
        let speeds = match &spec.shock_speeds {
            Some(v) => v.clone(),
            None => spec
                .states
                .windows(2)
                .map(|w| rh::shock_speed_from_mass(&w[0], &w[1], 1.0))
                .collect::<Result<_>>()?,
        };
        Self::new(model, spec.states.clone(), spec.shock_positions.clone(), speeds, spec.domain)
    }

    pub fn spec(&self) -> SolutionSpec {
        SolutionSpec {
            states: self.states.clone(),
            shock_positions: self.positions.clone(),
            shock_speeds: Some(self.speeds.clone()),
            domain: self.domain,
        }
    }

    /// One stationary shock at `x = 0` between `(1, 2)` and `(2, 1)` for the
    /// polytrope with `K = 2 / (2^gamma - 1)`, on the fixed domain `[-1, 1]`.
    pub fn stationary_example(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidModel(format!("gamma must exceed 1, got {gamma}")));
        }
        let k = 2.0 / (2f64.powf(gamma) - 1.0);
        Self::new(
            GasModel::barotropic(k, gamma)?,
            vec![FluidState::barotropic(1.0, 2.0), FluidState::barotropic(2.0, 1.0)],
            vec![0.0],
            vec![0.0],
            Domain::fixed(-1.0, 1.0),
        )
    }

    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        if !(domain.x_left < domain.x_right) {
            return Err(Error::InvalidSolution("domain must satisfy x_left < x_right".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    /// Translates every shock by `delta` and the domain with it.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.positions.iter_mut().for_each(|x| *x += delta);
        out.domain.x_left += delta;
        out.domain.x_right += delta;
        out
    }

    pub fn model(&self) -> &GasModel {
        &self.model
    }

    pub fn states(&self) -> &[FluidState] {
        &self.states
    }

    pub fn shock_positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn shock_speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn shock_count(&self) -> usize {
        self.positions.len()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Time interval `(t_min, t_max)` on which no two shocks have met.
    pub fn validity(&self) -> (f64, f64) {
        self.validity
    }

    pub fn in_validity(&self, t: f64) -> bool {
        t >= self.validity.0 && t <= self.validity.1
    }

    pub fn shock_position(&self, i: usize, t: f64) -> f64 {
        self.positions[i] + self.speeds[i] * t
    }

    /// Endpoints of the domain at time `t`.
    pub fn domain_at(&self, t: f64) -> (f64, f64) {
        match self.domain.motion {
            BoundaryMotion::Fixed => (self.domain.x_left, self.domain.x_right),
            BoundaryMotion::Free => (
                self.domain.x_left + self.states[0].u * t,
                self.domain.x_right + self.states[self.states.len() - 1].u * t,
            ),
        }
    }

    /// Index of the state occupying `x` at time `t`; points on a shock
    /// belong to the region on its left.
    pub fn region_index(&self, t: f64, x: f64) -> usize {
        (0..self.shock_count()).filter(|&i| self.shock_position(i, t) < x).count()
    }

    /// State at `(t, x)`. On a shock trajectory the left state is returned.
    pub fn evaluate(&self, t: f64, x: f64) -> Result<FluidState> {
        let (a, b) = self.domain_at(t);
        if !self.in_validity(t) || !(x >= a && x <= b) || !x.is_finite() {
            return Err(Error::OutOfDomain { t, x });
        }
        Ok(self.states[self.region_index(t, x)])
    }

    /// Jump across shock `i` with `n = +1`.
    pub fn jump(&self, i: usize) -> ShockJump {
        ShockJump {
            left: self.states[i],
            right: self.states[i + 1],
            normal: 1.0,
            speed: self.speeds[i],
            sigma_left: None,
            sigma_right: None,
            js_left: None,
            js_right: None,
        }
    }
}

fn validity_window(positions: &[f64], speeds: &[f64]) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let closing = speeds[i] - speeds[j];
            if closing == 0.0 {
                continue;
            }
            let t = (positions[j] - positions[i]) / closing;
            if t > 0.0 {
                hi = hi.min(t - HORIZON_MARGIN);
            } else {
                lo = lo.max(t + HORIZON_MARGIN);
            }
        }
    }
    (lo, hi)
}

/// Interface and boundary contributions to `dE/dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBudget {
    /// Sum over shocks of `[[(E + p) u]] - v_s [[E]]`.
    pub interface: f64,
    /// `-[p u]` at material endpoints, `-[(E + p) u]` at fixed ones.
    pub boundary: f64,
}

impl EnergyBudget {
    pub fn total(&self) -> f64 {
        self.interface + self.boundary
    }
}

pub fn energy_budget(sol: &PiecewiseShockSolution, t: f64) -> Result<EnergyBudget> {
    let model = sol.model();
    let mut interface = 0.0;
    for i in 0..sol.shock_count() {
        interface += rh::dissipation_rate(&sol.jump(i), model)?;
    }
    let (a, b) = sol.domain_at(t);
    let (sl, sr) = (sol.evaluate(t, a)?, sol.evaluate(t, b)?);
    let flux = |s: &FluidState| -> Result<f64> {
        let p = model.pressure(s)?;
        Ok(match sol.domain().motion {
            BoundaryMotion::Free => p * s.u,
            BoundaryMotion::Fixed => (model.energy_density(s)? + p) * s.u,
        })
    };
    Ok(EnergyBudget { interface, boundary: flux(&sl)? - flux(&sr)? })
}

/// Interface contribution to the rate of change of total energy. Endpoint
/// fluxes are excluded; see [`energy_budget`] for them.
pub fn energy_rate(sol: &PiecewiseShockSolution) -> Result<f64> {
    (0..sol.shock_count()).map(|i| rh::dissipation_rate(&sol.jump(i), sol.model())).sum()
}

/// Interface contribution to the rate of change of material length,
/// `sum(-v_s [[1]] + [[u]])`.
pub fn length_rate(sol: &PiecewiseShockSolution) -> f64 {
    sol.states().windows(2).map(|w| w[1].u - w[0].u).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub de_dt: f64,
    /// `-dV/dt` for the volume potential (unit reference density).
    pub neg_dv_dt: f64,
    pub gap: f64,
}

/// Compares the energy dissipation with the rate of the volume functional.
pub fn volume_potential_mismatch(sol: &PiecewiseShockSolution) -> Result<Mismatch> {
    let de_dt = energy_rate(sol)?;
    let neg_dv_dt = length_rate(sol);
    Ok(Mismatch { de_dt, neg_dv_dt, gap: (de_dt - neg_dv_dt).abs() })
}
