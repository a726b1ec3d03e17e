//! Equations of state built from the Lagrangian density
//! `l(u, rho, s) = rho u^2 / 2 - eps(rho, s)`.
//!
//! Two closures of `eps` are supported:
//!
//! * barotropic polytrope, `eps = K rho^gamma / (gamma - 1)` so that
//!   `p = K rho^gamma`;
//! * ideal gas with entropy density `s = rho S`, with specific internal energy
//!   `e(rho, S) = e_ref rho^(gamma - 1) exp(S / c_v)`.
//!
//! Pressure follows from `p = l - rho dl/drho - s dl/ds`, temperature from
//! `T = d eps / ds`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equation-of-state description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GasModel {
    /// `p = K rho^gamma`, no entropy variable.
    BarotropicPolytropic { k: f64, gamma: f64 },
    /// Ideal gas carrying an entropy density.
    IdealGasEntropy { gamma: f64, e_ref: f64, c_v: f64 },
}

impl GasModel {
    pub fn barotropic(k: f64, gamma: f64) -> Result<Self> {
        let model = GasModel::BarotropicPolytropic { k, gamma };
        model.validate()?;
        Ok(model)
    }

    pub fn ideal_gas(gamma: f64, e_ref: f64, c_v: f64) -> Result<Self> {
        let model = GasModel::IdealGasEntropy { gamma, e_ref, c_v };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidModel(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let gamma = self.gamma();
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidModel(format!("gamma must exceed 1, got {gamma}")));
        }
        match *self {
            GasModel::BarotropicPolytropic { k, .. } => positive("K", k),
            GasModel::IdealGasEntropy { e_ref, c_v, .. } => {
                positive("e_ref", e_ref)?;
                positive("c_v", c_v)
            }
        }
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            GasModel::BarotropicPolytropic { gamma, .. } | GasModel::IdealGasEntropy { gamma, .. } => gamma,
        }
    }

    pub fn requires_entropy(&self) -> bool {
        matches!(self, GasModel::IdealGasEntropy { .. })
    }

    pub fn is_barotropic(&self) -> bool {
        !self.requires_entropy()
    }

    /// Checks that `state` is admissible input for this model.
    pub fn check_state(&self, state: &FluidState) -> Result<()> {
        if !(state.rho.is_finite() && state.rho > 0.0) {
            return Err(Error::InvalidState(format!("density must be positive, got {}", state.rho)));
        }
        if !state.u.is_finite() {
            return Err(Error::InvalidState(format!("velocity must be finite, got {}", state.u)));
        }
        match (self.requires_entropy(), state.s) {
            (true, None) => Err(Error::MissingEntropy),
            (false, Some(_)) => Err(Error::UnexpectedEntropy),
            (true, Some(s)) if !s.is_finite() => {
                Err(Error::InvalidState(format!("entropy density must be finite, got {s}")))
            }
            _ => Ok(()),
        }
    }

    // Unchecked internal energy density; `s` ignored for the barotropic model.
    fn eps(&self, rho: f64, s: f64) -> f64 {
        match *self {
            GasModel::BarotropicPolytropic { k, gamma } => k * rho.powf(gamma) / (gamma - 1.0),
            GasModel::IdealGasEntropy { gamma, e_ref, c_v } => {
                e_ref * rho.powf(gamma) * (s / (rho * c_v)).exp()
            }
        }
    }

    /// `eps(rho, s)` without state validation, for derivative checks.
    pub fn internal_energy_raw(&self, rho: f64, s: f64) -> f64 {
        self.eps(rho, s)
    }

    /// Internal energy density: `rho e(rho)` or `eps(rho, s)`.
    pub fn internal_energy_density(&self, state: &FluidState) -> Result<f64> {
        self.check_state(state)?;
        Ok(self.eps(state.rho, state.s.unwrap_or(0.0)))
    }

    /// Total energy density `E = rho u^2 / 2 + rho e`.
    pub fn energy_density(&self, state: &FluidState) -> Result<f64> {
        Ok(0.5 * state.rho * state.u * state.u + self.internal_energy_density(state)?)
    }

    pub fn pressure(&self, state: &FluidState) -> Result<f64> {
        self.check_state(state)?;
        Ok(match *self {
            GasModel::BarotropicPolytropic { k, gamma } => k * state.rho.powf(gamma),
            GasModel::IdealGasEntropy { gamma, .. } => {
                (gamma - 1.0) * self.eps(state.rho, state.s.unwrap_or(0.0))
            }
        })
    }

    /// `T = d eps / ds`; only defined for the ideal-gas model.
    pub fn temperature(&self, state: &FluidState) -> Result<f64> {
        match *self {
            GasModel::BarotropicPolytropic { .. } => Err(Error::Unsupported("temperature")),
            GasModel::IdealGasEntropy { c_v, .. } => {
                self.check_state(state)?;
                Ok(self.eps(state.rho, state.s.unwrap_or(0.0)) / (state.rho * c_v))
            }
        }
    }

    /// Isentropic sound speed `sqrt(dp/drho |_S)`.
    pub fn sound_speed(&self, state: &FluidState) -> Result<f64> {
        let p = self.pressure(state)?;
        Ok((self.gamma() * p / state.rho).sqrt())
    }

    /// `dp/ds` at fixed density, `(gamma - 1) T` for the ideal gas.
    pub fn pressure_entropy_derivative(&self, state: &FluidState) -> Result<f64> {
        Ok((self.gamma() - 1.0) * self.temperature(state)?)
    }

    /// `l = rho u^2 / 2 - eps(rho, s)`.
    pub fn lagrangian_density(&self, state: &FluidState) -> Result<f64> {
        Ok(0.5 * state.rho * state.u * state.u - self.internal_energy_density(state)?)
    }

    /// Builds the state with the given density, velocity and pressure.
    pub fn state_from_pressure(&self, rho: f64, u: f64, p: f64) -> Result<FluidState> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidState(format!("pressure must be positive, got {p}")));
        }
        let state = match *self {
            GasModel::BarotropicPolytropic { .. } => FluidState::barotropic(rho, u),
            GasModel::IdealGasEntropy { gamma, e_ref, c_v } => {
                let eps = p / (gamma - 1.0);
                let s = rho * c_v * (eps / (e_ref * rho.powf(gamma))).ln();
                FluidState::with_entropy(rho, u, s)
            }
        };
        self.check_state(&state)?;
        Ok(state)
    }

    /// Recovers primitive state from conserved `(rho, rho u, E)`. The energy
    /// argument is ignored for the barotropic model.
    pub fn state_from_conserved(&self, rho: f64, momentum: f64, energy: f64) -> Result<FluidState> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidState(format!("vacuum or negative density {rho}")));
        }
        let u = momentum / rho;
        match *self {
            GasModel::BarotropicPolytropic { .. } => {
                let state = FluidState::barotropic(rho, u);
                self.check_state(&state)?;
                Ok(state)
            }
            GasModel::IdealGasEntropy { gamma, .. } => {
                let eps = energy - 0.5 * rho * u * u;
                if !(eps.is_finite() && eps > 0.0) {
                    return Err(Error::InvalidState(format!(
                        "non-positive internal energy {eps}"
                    )));
                }
                self.state_from_pressure(rho, u, (gamma - 1.0) * eps)
            }
        }
    }

    /// Specific entropy `S = s / rho` (ideal gas only).
    pub fn specific_entropy(&self, state: &FluidState) -> Result<f64> {
        if self.is_barotropic() {
            return Err(Error::Unsupported("specific_entropy"));
        }
        self.check_state(state)?;
        Ok(state.s.unwrap_or(0.0) / state.rho)
    }
}

/// One-sided fluid state in one space dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidState {
    pub rho: f64,
    pub u: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

impl FluidState {
    pub fn barotropic(rho: f64, u: f64) -> Self {
        FluidState { rho, u, s: None }
    }

    pub fn with_entropy(rho: f64, u: f64, s: f64) -> Self {
        FluidState { rho, u, s: Some(s) }
    }

    pub fn momentum(&self) -> f64 {
        self.rho * self.u
    }

    /// Same state seen from a frame moving with velocity `-c`.
    pub fn boosted(&self, c: f64) -> Self {
        FluidState { u: self.u + c, ..*self }
    }
}
