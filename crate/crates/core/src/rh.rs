//! Rankine-Hugoniot residuals, shock speeds, Hugoniot-locus solvers and
//! admissibility tests for barotropic and full Euler jumps.
//!
//! With `[[q]] = q_right - q_left` and `n` pointing left to right, a jump
//! moving with normal speed `v_s` satisfies the conservation law for the
//! pair `(U, F)` iff `v_s [[U]] - [[F]] n = 0`.

use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::eos::{FluidState, GasModel};
use crate::error::{Error, Result};

/// Residual acceptance of the Hugoniot solvers (absolute, desk units).
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Slack allowed in the admissibility inequalities.
pub const ADMISSIBILITY_TOLERANCE: f64 = 1e-12;
/// Mass/momentum residual bound required before admissibility is judged.
pub const ADMISSIBILITY_RH_BOUND: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 200;

/// A left/right state pair separated by an interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockJump {
    pub left: FluidState,
    pub right: FluidState,
    /// `+1` or `-1`.
    pub normal: f64,
    /// Interface speed along `normal`.
    pub speed: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_right: Option<f64>,
    /// One-sided normal entropy flux `j_s . n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub js_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub js_right: Option<f64>,
}

impl ShockJump {
    pub fn new(left: FluidState, right: FluidState, normal: f64, speed: f64) -> Result<Self> {
        let jump = ShockJump {
            left,
            right,
            normal,
            speed,
            sigma_left: None,
            sigma_right: None,
            js_left: None,
            js_right: None,
        };
        jump.validate()?;
        Ok(jump)
    }

    pub fn validate(&self) -> Result<()> {
        if self.normal != 1.0 && self.normal != -1.0 {
            return Err(Error::InvalidJump(format!("normal must be +1 or -1, got {}", self.normal)));
        }
        if !self.speed.is_finite() {
            return Err(Error::InvalidJump("interface speed must be finite".into()));
        }
        Ok(())
    }

    pub fn with_sigma(mut self, left: f64, right: f64) -> Self {
        self.sigma_left = Some(left);
        self.sigma_right = Some(right);
        self
    }

    pub fn with_entropy_flux(mut self, left: f64, right: f64) -> Self {
        self.js_left = Some(left);
        self.js_right = Some(right);
        self
    }

    /// Same physical interface described with the opposite normal: states
    /// swapped, normal and normal speed negated.
    pub fn flipped(&self) -> Self {
        ShockJump {
            left: self.right,
            right: self.left,
            normal: -self.normal,
            speed: -self.speed,
            sigma_left: self.sigma_right,
            sigma_right: self.sigma_left,
            js_left: self.js_right.map(|j| -j),
            js_right: self.js_left.map(|j| -j),
        }
    }

    /// Galilean boost by `c`: velocities and the lab-frame interface
    /// velocity `speed * normal` shift by `c`.
    pub fn boosted(&self, c: f64) -> Self {
        ShockJump {
            left: self.left.boosted(c),
            right: self.right.boosted(c),
            speed: self.speed + c * self.normal,
            ..*self
        }
    }

    fn has_entropy_flux(&self) -> bool {
        self.js_left.unwrap_or(0.0) != 0.0 || self.js_right.unwrap_or(0.0) != 0.0
    }
}

/// Per-conservation-law residual of a candidate jump.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RhResidual {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub entropy_var: f64,
}

impl RhResidual {
    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        [self.mass, self.momentum, self.energy, self.entropy_var]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Euclidean norm over the components a model conserves: mass and
    /// momentum for barotropic flow, all four for the ideal gas.
    pub fn norm_for(&self, model: &GasModel) -> f64 {
        if model.is_barotropic() {
            self.mass.hypot(self.momentum)
        } else {
            (self.mass.powi(2) + self.momentum.powi(2) + self.energy.powi(2) + self.entropy_var.powi(2))
                .sqrt()
        }
    }

    pub fn mass_momentum_max(&self) -> f64 {
        self.mass.abs().max(self.momentum.abs())
    }

    /// Largest residual among the laws the model conserves.
    pub fn max_abs_conserved(&self, model: &GasModel) -> f64 {
        if model.is_barotropic() {
            self.mass_momentum_max()
        } else {
            self.max_abs()
        }
    }
}

/// Residuals `v_s [[U]] - [[F(U)]] n` for mass, momentum, energy and the
/// `s - sigma` bookkeeping law.
///
/// For the barotropic model `energy` is the mechanical-energy residual, which
/// is nonzero across dissipative shocks, and `entropy_var` is exactly zero.
/// When an interfacial entropy flux is present the energy flux gains `T j_s`
/// and the `s - sigma` flux gains `j_s`.
pub fn rh_residuals(jump: &ShockJump, model: &GasModel) -> Result<RhResidual> {
    jump.validate()?;
    model.check_state(&jump.left)?;
    model.check_state(&jump.right)?;
    let (l, r, n, v) = (&jump.left, &jump.right, jump.normal, jump.speed);
    let (pl, pr) = (model.pressure(l)?, model.pressure(r)?);
    let (el, er) = (model.energy_density(l)?, model.energy_density(r)?);

    let mass = v * (r.rho - l.rho) - (r.momentum() - l.momentum()) * n;
    let momentum = v * (r.momentum() - l.momentum())
        - ((r.momentum() * r.u + pr) - (l.momentum() * l.u + pl)) * n;
    let mut energy = v * (er - el) - ((er + pr) * r.u - (el + pl) * l.u) * n;

    let (jl, jr) = (jump.js_left.unwrap_or(0.0), jump.js_right.unwrap_or(0.0));
    if jump.has_entropy_flux() {
        if model.is_barotropic() {
            return Err(Error::Unsupported("entropy flux across a barotropic jump"));
        }
        energy -= model.temperature(r)? * jr - model.temperature(l)? * jl;
    }

    let entropy_var = if model.is_barotropic() {
        0.0
    } else {
        let (sl, sr) = (l.s.unwrap_or(0.0), r.s.unwrap_or(0.0));
        let dl = sl - jump.sigma_left.unwrap_or(sl);
        let dr = sr - jump.sigma_right.unwrap_or(sr);
        v * (dr - dl) - ((dr * r.u - dl * l.u) * n + (jr - jl))
    };

    Ok(RhResidual { mass, momentum, energy, entropy_var })
}

/// Interface speed from the mass condition, `v_s = [[rho u]] n / [[rho]]`.
pub fn shock_speed_from_mass(left: &FluidState, right: &FluidState, normal: f64) -> Result<f64> {
    let drho = right.rho - left.rho;
    if drho.abs() <= 1e-14 * left.rho.max(right.rho) {
        return Err(Error::DegenerateJump(
            "equal densities leave the speed undetermined by mass alone".into(),
        ));
    }
    Ok((right.momentum() - left.momentum()) * normal / drho)
}

/// Energy production rate per unit interface area,
/// `[[(E + p) u]] n - v_s [[E]]`. Negative means energy is dissipated.
pub fn dissipation_rate(jump: &ShockJump, model: &GasModel) -> Result<f64> {
    let (l, r, n, v) = (&jump.left, &jump.right, jump.normal, jump.speed);
    let (el, er) = (model.energy_density(l)?, model.energy_density(r)?);
    let (pl, pr) = (model.pressure(l)?, model.pressure(r)?);
    Ok(((er + pr) * r.u - (el + pl) * l.u) * n - v * (er - el))
}

/// Admissibility tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    /// Mass/momentum residual bound the jump must meet first.
    pub rh_bound: f64,
    pub tolerance: f64,
}

impl Default for Admissibility {
    fn default() -> Self {
        Admissibility { rh_bound: ADMISSIBILITY_RH_BOUND, tolerance: ADMISSIBILITY_TOLERANCE }
    }
}

impl Admissibility {
    /// Barotropic: mechanical energy must not be produced at the jump.
    /// Ideal gas: specific entropy must not decrease from the upstream to
    /// the downstream side.
    pub fn check(&self, jump: &ShockJump, model: &GasModel) -> Result<bool> {
        let res = rh_residuals(&ShockJump { js_left: None, js_right: None, ..*jump }, model)?;
        if res.mass_momentum_max() >= self.rh_bound {
            return Err(Error::InvalidJump(format!(
                "mass/momentum residual {:e} exceeds {:e}",
                res.mass_momentum_max(),
                self.rh_bound
            )));
        }
        if model.is_barotropic() {
            return Ok(dissipation_rate(jump, model)? <= self.tolerance);
        }
        // mass flux through the interface, along n
        let flux = jump.left.rho * (jump.left.u * jump.normal - jump.speed);
        let (sl, sr) = (model.specific_entropy(&jump.left)?, model.specific_entropy(&jump.right)?);
        Ok(if flux > 0.0 {
            sr >= sl - self.tolerance
        } else if flux < 0.0 {
            sl >= sr - self.tolerance
        } else {
            true
        })
    }
}

pub fn entropy_admissible(jump: &ShockJump, model: &GasModel) -> Result<bool> {
    Admissibility::default().check(jump, model)
}

/// Fourier-law entropy flux `-kappa T_x / T`. Vanishes in the bulk of a
/// piecewise-constant solution.
pub fn fourier_entropy_flux(kappa: f64, temperature_gradient: f64, temperature: f64) -> f64 {
    -kappa * temperature_gradient / temperature
}

/// Which root of the Hugoniot system to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    #[default]
    Admissible,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarotropicShock {
    pub u_right: f64,
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullShock {
    pub u_right: f64,
    pub s_right: f64,
    pub speed: f64,
}

/// Both Hugoniot roots, admissible first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branches<T> {
    pub admissible: T,
    pub other: T,
}

impl<T: Copy> Branches<T> {
    pub fn select(&self, branch: Branch) -> T {
        match branch {
            Branch::Admissible => self.admissible,
            Branch::Other => self.other,
        }
    }
}

/// Solver settings for the Hugoniot problems. All shocks use `n = +1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HugoniotSolver {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for HugoniotSolver {
    fn default() -> Self {
        HugoniotSolver { tolerance: RESIDUAL_TOLERANCE, max_iterations: MAX_ITERATIONS }
    }
}

impl HugoniotSolver {
    /// Both roots `(u_R, v_s)` of the mass/momentum system connecting `left`
    /// to a state of density `rho_right`.
    pub fn barotropic_branches(
        &self,
        left: &FluidState,
        rho_right: f64,
        model: &GasModel,
    ) -> Result<Branches<BarotropicShock>> {
        if !model.is_barotropic() {
            return Err(Error::Unsupported("barotropic Hugoniot solve on an ideal-gas model"));
        }
        model.check_state(left)?;
        model.check_state(&FluidState::barotropic(rho_right, 0.0))?;
        if (rho_right - left.rho).abs() <= 1e-14 * left.rho.max(rho_right) {
            return Err(Error::DegenerateJump("rho_right equals rho_left".into()));
        }
        let (rl, rr) = (left.rho, rho_right);
        let pl = model.pressure(left)?;
        let pr = model.pressure(&FluidState::barotropic(rr, 0.0))?;

        let system = |x: &SVector<f64, 2>| -> Result<(SVector<f64, 2>, SMatrix<f64, 2, 2>)> {
            let (ur, v) = (x[0], x[1]);
            let mass = v * (rr - rl) - (rr * ur - rl * left.u);
            let mom = v * (rr * ur - rl * left.u) - (rr * ur * ur + pr - rl * left.u * left.u - pl);
            let jac = SMatrix::<f64, 2, 2>::new(-rr, rr - rl, v * rr - 2.0 * rr * ur, rr * ur - rl * left.u);
            Ok((SVector::<f64, 2>::new(mass, mom), jac))
        };

        let c_mid = model.sound_speed(&FluidState::barotropic(0.5 * (rl + rr), 0.0))?;
        let mut roots: Vec<BarotropicShock> = Vec::new();
        for sign in [1.0, -1.0] {
            let v0 = left.u + sign * c_mid;
            let seed = SVector::<f64, 2>::new(v0 + rl * (left.u - v0) / rr, v0);
            if let Ok(x) = damped_newton(seed, &system, self) {
                push_distinct(&mut roots, BarotropicShock { u_right: x[0], speed: x[1] });
            }
        }
        if roots.len() < 2 {
            log::debug!("Newton found {} Hugoniot root(s); falling back to bisection", roots.len());
            // momentum residual along the mass-consistent curve, parameterized by u_R
            let curve = |ur: f64| {
                let v = (rr * ur - rl * left.u) / (rr - rl);
                v * (rr * ur - rl * left.u) - (rr * ur * ur + pr - rl * left.u * left.u - pl)
            };
            for dir in [1.0, -1.0] {
                let ur = bisect_outward(&curve, left.u, dir, self)?;
                let v = (rr * ur - rl * left.u) / (rr - rl);
                let x = damped_newton(SVector::<f64, 2>::new(ur, v), &system, self)?;
                push_distinct(&mut roots, BarotropicShock { u_right: x[0], speed: x[1] });
            }
        }
        if roots.len() < 2 {
            return Err(Error::NoShock("Hugoniot system has fewer than two real roots".into()));
        }

        let classify = |s: &BarotropicShock| -> Result<bool> {
            let jump = ShockJump::new(*left, FluidState::barotropic(rr, s.u_right), 1.0, s.speed)?;
            entropy_admissible(&jump, model)
        };
        let (a, b) = (roots[0], roots[1]);
        match (classify(&a)?, classify(&b)?) {
            (true, false) => Ok(Branches { admissible: a, other: b }),
            (false, true) => Ok(Branches { admissible: b, other: a }),
            _ => Err(Error::NoShock("could not single out an admissible branch".into())),
        }
    }

    /// Both roots `(u_R, s_R, v_s)` of the mass/momentum/energy system.
    pub fn full_branches(
        &self,
        left: &FluidState,
        rho_right: f64,
        model: &GasModel,
    ) -> Result<Branches<FullShock>> {
        let GasModel::IdealGasEntropy { gamma, .. } = *model else {
            return Err(Error::Unsupported("full Hugoniot solve on a barotropic model"));
        };
        model.check_state(left)?;
        if !(rho_right.is_finite() && rho_right > 0.0) {
            return Err(Error::InvalidState(format!("density must be positive, got {rho_right}")));
        }
        if (rho_right - left.rho).abs() <= 1e-14 * left.rho.max(rho_right) {
            return Err(Error::DegenerateJump("rho_right equals rho_left".into()));
        }
        let (rl, rr) = (left.rho, rho_right);
        let pl = model.pressure(left)?;
        let el = model.energy_density(left)?;
        let (tau_l, tau_r) = (1.0 / rl, 1.0 / rr);

        // energy Hugoniot for eps = p / (gamma - 1): linear in p_R
        let a = tau_r / (gamma - 1.0) + 0.5 * (tau_r - tau_l);
        let b = tau_l / (gamma - 1.0) - 0.5 * (tau_r - tau_l);
        if a <= 0.0 || b <= 0.0 {
            return Err(Error::NoShock(format!(
                "density ratio {} is beyond the maximal compression {}",
                rr / rl,
                (gamma + 1.0) / (gamma - 1.0)
            )));
        }
        let pr = pl * b / a;
        let m2 = (pr - pl) / (tau_l - tau_r);
        if !(m2 > 0.0) {
            return Err(Error::NoShock(format!("negative squared mass flux {m2}")));
        }
        let s_r0 = model.state_from_pressure(rr, 0.0, pr)?.s.unwrap_or(0.0);

        let system = |x: &SVector<f64, 3>| -> Result<(SVector<f64, 3>, SMatrix<f64, 3, 3>)> {
            let (ur, sr, v) = (x[0], x[1], x[2]);
            let right = FluidState::with_entropy(rr, ur, sr);
            let p = model.pressure(&right)?;
            let e = model.energy_density(&right)?;
            let t = model.temperature(&right)?;
            let dp_ds = model.pressure_entropy_derivative(&right)?;
            let mass = v * (rr - rl) - (rr * ur - rl * left.u);
            let mom = v * (rr * ur - rl * left.u) - (rr * ur * ur + p - rl * left.u * left.u - pl);
            let energy = v * (e - el) - ((e + p) * ur - (el + pl) * left.u);
            #[rustfmt::skip]
            let jac = SMatrix::<f64, 3, 3>::new(
                -rr, 0.0, rr - rl,
                v * rr - 2.0 * rr * ur, -dp_ds, rr * ur - rl * left.u,
                v * rr * ur - (rr * ur * ur + e + p), v * t - (t + dp_ds) * ur, e - el,
            );
            Ok((SVector::<f64, 3>::new(mass, mom, energy), jac))
        };

        let mut roots = Vec::with_capacity(2);
        for sign in [1.0, -1.0] {
            let m = sign * m2.sqrt();
            let v = left.u - m / rl;
            let seed = SVector::<f64, 3>::new(v + m / rr, s_r0, v);
            let x = damped_newton(seed, &system, self)?;
            roots.push(FullShock { u_right: x[0], s_right: x[1], speed: x[2] });
        }
        let classify = |s: &FullShock| -> Result<bool> {
            let right = FluidState::with_entropy(rr, s.u_right, s.s_right);
            entropy_admissible(&ShockJump::new(*left, right, 1.0, s.speed)?, model)
        };
        match (classify(&roots[0])?, classify(&roots[1])?) {
            (true, false) => Ok(Branches { admissible: roots[0], other: roots[1] }),
            (false, true) => Ok(Branches { admissible: roots[1], other: roots[0] }),
            _ => Err(Error::NoShock("could not single out an admissible branch".into())),
        }
    }
}

/// Admissible `(u_R, v_s)` connecting `left` to density `rho_right`.
pub fn hugoniot_solve_barotropic(
    left: &FluidState,
    rho_right: f64,
    model: &GasModel,
) -> Result<BarotropicShock> {
    Ok(HugoniotSolver::default().barotropic_branches(left, rho_right, model)?.admissible)
}

/// Admissible `(u_R, s_R, v_s)` connecting `left` to density `rho_right`.
pub fn hugoniot_solve_full(left: &FluidState, rho_right: f64, model: &GasModel) -> Result<FullShock> {
    Ok(HugoniotSolver::default().full_branches(left, rho_right, model)?.admissible)
}

fn push_distinct(roots: &mut Vec<BarotropicShock>, candidate: BarotropicShock) {
    let scale = 1.0 + candidate.u_right.abs() + candidate.speed.abs();
    if roots.iter().all(|r| {
        (r.u_right - candidate.u_right).abs() + (r.speed - candidate.speed).abs() > 1e-8 * scale
    }) {
        roots.push(candidate);
    }
}

/// Damped Newton iteration with backtracking on the max-norm of the residual.
fn damped_newton<const N: usize, F>(
    mut x: SVector<f64, N>,
    system: &F,
    solver: &HugoniotSolver,
) -> Result<SVector<f64, N>>
where
    F: Fn(&SVector<f64, N>) -> Result<(SVector<f64, N>, SMatrix<f64, N, N>)>,
{
    let (mut f, mut jac) = system(&x)?;
    let target = solver.tolerance * 1e-3;
    for _ in 0..solver.max_iterations {
        let norm = f.amax();
        if norm <= target {
            return Ok(x);
        }
        let lu = DMatrix::from_column_slice(N, N, jac.as_slice()).lu();
        let Some(step) = lu.solve(&DVector::from_column_slice((-f).as_slice())) else {
            break;
        };
        let step = SVector::<f64, N>::from_column_slice(step.as_slice());
        let mut alpha = 1.0;
        let mut accepted = false;
        while alpha > 1e-6 {
            let trial = x + step * alpha;
            if let Ok((ft, jt)) = system(&trial) {
                if ft.amax() < norm {
                    x = trial;
                    f = ft;
                    jac = jt;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            // no further decrease at roundoff level
            break;
        }
    }
    let residual = f.amax();
    if residual <= solver.tolerance {
        Ok(x)
    } else {
        Err(Error::NonConvergence { iterations: solver.max_iterations, residual })
    }
}

/// Root of `g` on the ray `origin + dir * t`, `t > 0`, by expanding the
/// bracket geometrically and bisecting.
fn bisect_outward<G: Fn(f64) -> f64>(g: &G, origin: f64, dir: f64, solver: &HugoniotSolver) -> Result<f64> {
    let g0 = g(origin);
    let mut width = 1e-3 * (1.0 + origin.abs());
    let mut far = origin + dir * width;
    let mut expansions = 0;
    while g(far).signum() == g0.signum() {
        width *= 2.0;
        far = origin + dir * width;
        expansions += 1;
        if expansions > 80 {
            return Err(Error::NoShock("no sign change along the Hugoniot curve".into()));
        }
    }
    let (mut lo, mut hi) = (origin, far);
    for _ in 0..solver.max_iterations {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * (1.0 + mid.abs()) {
            return Ok(mid);
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn example_states() -> (GasModel, FluidState, FluidState) {
        (
            GasModel::barotropic(2.0 / 3.0, 2.0).unwrap(),
            FluidState::barotropic(1.0, 2.0),
            FluidState::barotropic(2.0, 1.0),
        )
    }

    #[test]
    fn stationary_example_shock_residuals() {
        let (m, l, r) = example_states();
        let res = rh_residuals(&ShockJump::new(l, r, 1.0, 0.0).unwrap(), &m).unwrap();
        assert!(res.mass.abs() < 1e-14);
        assert!(res.momentum.abs() < 1e-14);
        assert_relative_eq!(res.energy, 1.0 / 3.0, epsilon = 1e-14);
        assert_eq!(res.entropy_var, 0.0);
    }

    #[test]
    fn zero_jump_has_zero_residual() {
        let m = GasModel::ideal_gas(1.4, 1.0, 1.0).unwrap();
        let s = FluidState::with_entropy(1.2, 0.3, 0.1);
        for v in [-3.0, 0.0, 0.7] {
            let res = rh_residuals(&ShockJump::new(s, s, 1.0, v).unwrap(), &m).unwrap();
            assert_eq!(res.max_abs(), 0.0);
        }
    }

    #[test]
    fn speed_from_mass() {
        let b = FluidState::barotropic;
        assert_eq!(shock_speed_from_mass(&b(1.0, 2.0), &b(2.0, 1.0), 1.0).unwrap(), 0.0);
        assert_eq!(shock_speed_from_mass(&b(1.0, 0.0), &b(2.0, 0.0), 1.0).unwrap(), 0.0);
        assert_eq!(shock_speed_from_mass(&b(1.0, 1.0), &b(3.0, 2.0), 1.0).unwrap(), 2.5);
        assert!(matches!(
            shock_speed_from_mass(&b(1.0, 1.0), &b(1.0, 2.0), 1.0),
            Err(Error::DegenerateJump(_))
        ));
    }

    #[test]
    fn example_hugoniot_root() {
        let (m, l, _) = example_states();
        let shock = hugoniot_solve_barotropic(&l, 2.0, &m).unwrap();
        assert!((shock.u_right - 1.0).abs() < 1e-10);
        assert!(shock.speed.abs() < 1e-10);
        let branches = HugoniotSolver::default().barotropic_branches(&l, 2.0, &m).unwrap();
        assert_ne!(branches.other, branches.admissible);
        assert!(matches!(hugoniot_solve_barotropic(&l, 1.0, &m), Err(Error::DegenerateJump(_))));
    }

    #[test]
    fn admissibility_of_example_shock_and_its_reverse() {
        let (m, l, r) = example_states();
        let jump = ShockJump::new(l, r, 1.0, 0.0).unwrap();
        assert_relative_eq!(dissipation_rate(&jump, &m).unwrap(), -1.0 / 3.0, epsilon = 1e-14);
        assert!(entropy_admissible(&jump, &m).unwrap());
        // same description seen with the opposite normal is the same shock
        assert!(entropy_admissible(&jump.flipped(), &m).unwrap());
        // expansion shock: dense fluid streaming into the light state
        let reversed = ShockJump::new(r, l, 1.0, 0.0).unwrap();
        assert!(!entropy_admissible(&reversed, &m).unwrap());
        let still = ShockJump::new(l, l, 1.0, 0.0).unwrap();
        assert!(entropy_admissible(&still, &m).unwrap());
        let bad = ShockJump::new(l, FluidState::barotropic(2.0, 1.5), 1.0, 0.0).unwrap();
        assert!(matches!(entropy_admissible(&bad, &m), Err(Error::InvalidJump(_))));
    }

    #[test]
    fn entropy_flux_enters_energy_and_entropy_laws() {
        let m = GasModel::ideal_gas(1.4, 1.0, 1.0).unwrap();
        let s = FluidState::with_entropy(1.0, 0.5, 0.2);
        let base = ShockJump::new(s, s, 1.0, 0.1).unwrap();
        let t = m.temperature(&s).unwrap();
        let res = rh_residuals(&base.with_entropy_flux(0.0, 0.3), &m).unwrap();
        assert_relative_eq!(res.energy, -t * 0.3, epsilon = 1e-15);
        assert_relative_eq!(res.entropy_var, -0.3, epsilon = 1e-15);
        let sig = rh_residuals(&base.with_sigma(0.0, 0.1), &m).unwrap();
        // s - sigma jumps from 0.2 to 0.1
        assert_relative_eq!(sig.entropy_var, 0.1 * (-0.1) - (-0.1 * 0.5), epsilon = 1e-15);
        let baro = GasModel::barotropic(1.0, 1.4).unwrap();
        let b = FluidState::barotropic(1.0, 0.0);
        assert!(rh_residuals(&ShockJump::new(b, b, 1.0, 0.0).unwrap().with_entropy_flux(1.0, 0.0), &baro).is_err());
    }

    #[test]
    fn full_hugoniot_over_compression_is_rejected() {
        let m = GasModel::ideal_gas(1.4, 1.0, 1.0).unwrap();
        let l = m.state_from_pressure(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(hugoniot_solve_full(&l, 6.5, &m), Err(Error::NoShock(_))));
    }

    #[test]
    fn fourier_flux_vanishes_without_gradient() {
        assert_eq!(fourier_entropy_flux(0.3, 0.0, 2.0), 0.0);
        assert_eq!(fourier_entropy_flux(1.0, 2.0, 4.0), -0.5);
    }

    #[test]
    fn invalid_normal_rejected() {
        let (_, l, r) = example_states();
        assert!(ShockJump::new(l, r, 0.5, 0.0).is_err());
    }
}
