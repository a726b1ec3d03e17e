//! Flow maps of piecewise-constant solutions, the Eulerian reference density
//! `lambda = Lambda(phi^-1) / J(phi)`, the shock dissipation potential and
//! the augmented-energy balance.
//!
//! In a region of constant velocity `u` the flow map is `phi(t, X) = X + u t`
//! with unit Jacobian. `neg_v_shock` returns `-V_shock`, the integral of the
//! reference density over the labels that currently occupy the domain.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::shock1d::{energy_rate, PiecewiseShockSolution};

/// Absolute tolerance of the reference-domain quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Reference density `Lambda(X)` of one region.
#[derive(Clone)]
pub enum ReferenceDensity {
    Constant(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ReferenceDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceDensity::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            ReferenceDensity::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl ReferenceDensity {
    pub fn function<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        ReferenceDensity::Function(Arc::new(f))
    }

    pub fn at(&self, label: f64) -> f64 {
        match self {
            ReferenceDensity::Constant(c) => *c,
            ReferenceDensity::Function(f) => f(label),
        }
    }

    fn integral(&self, a: f64, b: f64, tolerance: f64) -> f64 {
        match self {
            ReferenceDensity::Constant(c) => c * (b - a),
            ReferenceDensity::Function(f) => adaptive_simpson(&|x| f(x), a, b, tolerance),
        }
    }
}

/// Affine-in-time flow map of a piecewise-constant solution, one piece per
/// region.
#[derive(Debug, Clone)]
pub struct FlowMap1D {
    velocities: Vec<f64>,
    densities: Vec<ReferenceDensity>,
    positions: Vec<f64>,
    speeds: Vec<f64>,
}

impl FlowMap1D {
    pub fn new(sol: &PiecewiseShockSolution, densities: Vec<ReferenceDensity>) -> Result<Self> {
        if densities.len() != sol.states().len() {
            return Err(Error::InvalidSolution(format!(
                "{} reference densities for {} regions",
                densities.len(),
                sol.states().len()
            )));
        }
        Ok(FlowMap1D {
            velocities: sol.states().iter().map(|s| s.u).collect(),
            densities,
            positions: sol.shock_positions().to_vec(),
            speeds: sol.shock_speeds().to_vec(),
        })
    }

    /// `Lambda = c` in every region.
    pub fn uniform(sol: &PiecewiseShockSolution, c: f64) -> Self {
        let densities = vec![ReferenceDensity::Constant(c); sol.states().len()];
        Self::new(sol, densities).expect("one density per region")
    }

    /// Constant one-sided densities from [`calibrate_lambda`].
    pub fn calibrated(sol: &PiecewiseShockSolution) -> Result<Self> {
        let (l, r) = calibrate_lambda(sol)?;
        Self::new(sol, vec![ReferenceDensity::Constant(l), ReferenceDensity::Constant(r)])
    }

    pub fn region_count(&self) -> usize {
        self.velocities.len()
    }

    /// `phi(t, X)` for region `region`.
    pub fn map(&self, region: usize, t: f64, label: f64) -> f64 {
        label + self.velocities[region] * t
    }

    pub fn inverse(&self, region: usize, t: f64, x: f64) -> f64 {
        x - self.velocities[region] * t
    }

    pub fn jacobian(&self, _region: usize, _t: f64, _label: f64) -> f64 {
        1.0
    }

    fn shock_position(&self, i: usize, t: f64) -> f64 {
        self.positions[i] + self.speeds[i] * t
    }

    fn region_of(&self, t: f64, x: f64) -> Result<usize> {
        let mut region = 0;
        for i in 0..self.positions.len() {
            let xs = self.shock_position(i, t);
            if x == xs {
                return Err(Error::OnShock { t, x });
            }
            if xs < x {
                region += 1;
            }
        }
        Ok(region)
    }

    /// One-sided `lambda` of `region` at `(t, x)`.
    pub fn lambda_in(&self, region: usize, t: f64, x: f64) -> f64 {
        let label = self.inverse(region, t, x);
        self.densities[region].at(label) / self.jacobian(region, t, label)
    }

    /// Eulerian `lambda(t, x)` off the shock trajectories.
    pub fn lambda_field(&self, t: f64, x: f64) -> Result<f64> {
        let region = self.region_of(t, x)?;
        Ok(self.lambda_in(region, t, x))
    }

    /// `(lambda_-, lambda_+)` on either side of shock `i` at time `t`.
    pub fn one_sided(&self, i: usize, t: f64) -> (f64, f64) {
        let xs = self.shock_position(i, t);
        (self.lambda_in(i, t, xs), self.lambda_in(i + 1, t, xs))
    }
}

/// `-V_shock` at time `t`: the reference measure `Lambda dX` of the labels
/// occupying the solution domain.
pub fn neg_v_shock(map: &FlowMap1D, sol: &PiecewiseShockSolution, t: f64) -> Result<f64> {
    neg_v_shock_with_tolerance(map, sol, t, QUADRATURE_TOLERANCE)
}

pub fn neg_v_shock_with_tolerance(
    map: &FlowMap1D,
    sol: &PiecewiseShockSolution,
    t: f64,
    tolerance: f64,
) -> Result<f64> {
    check_compatible(map, sol)?;
    if !sol.in_validity(t) {
        return Err(Error::OutOfDomain { t, x: f64::NAN });
    }
    let (a, b) = sol.domain_at(t);
    let m = sol.shock_count();
    let mut total = 0.0;
    for region in 0..=m {
        let lo = if region == 0 { a } else { a.max(sol.shock_position(region - 1, t)) };
        let hi = if region == m { b } else { b.min(sol.shock_position(region, t)) };
        if hi > lo {
            let (ref_lo, ref_hi) = (map.inverse(region, t, lo), map.inverse(region, t, hi));
            total += map.densities[region].integral(ref_lo, ref_hi, tolerance);
        }
    }
    Ok(total)
}

/// Interface and boundary parts of `d(-V_shock)/dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialRate {
    /// `sum(-v_s [[lambda]] + [[lambda u]])` over shocks inside the domain.
    pub interface: f64,
    /// `lambda (w - u)` at the endpoints, `w` the endpoint velocity; zero for
    /// material endpoints.
    pub boundary: f64,
}

impl PotentialRate {
    pub fn total(&self) -> f64 {
        self.interface + self.boundary
    }
}

pub fn neg_v_shock_rate(map: &FlowMap1D, sol: &PiecewiseShockSolution, t: f64) -> Result<PotentialRate> {
    check_compatible(map, sol)?;
    if !sol.in_validity(t) {
        return Err(Error::OutOfDomain { t, x: f64::NAN });
    }
    let (a, b) = sol.domain_at(t);
    let mut interface = 0.0;
    for i in 0..sol.shock_count() {
        let xs = sol.shock_position(i, t);
        if xs <= a || xs >= b {
            continue;
        }
        let (lm, lp) = map.one_sided(i, t);
        let (um, up) = (map.velocities[i], map.velocities[i + 1]);
        interface += -sol.shock_speeds()[i] * (lp - lm) + (lp * up - lm * um);
    }
    let first = sol.region_index(t, a);
    let last = sol.region_index(t, b);
    let (wa, wb) = if sol.domain().is_free() {
        (map.velocities[0], map.velocities[map.region_count() - 1])
    } else {
        (0.0, 0.0)
    };
    let boundary = map.lambda_in(last, t, b) * (wb - map.velocities[last])
        - map.lambda_in(first, t, a) * (wa - map.velocities[first]);
    Ok(PotentialRate { interface, boundary })
}

/// One-sided constants `(lambda_L, lambda_R)` of a single-shock solution for
/// which `-v_s [[lambda]] + [[lambda u]]` equals the interface energy rate,
/// in the gauge `lambda_L = 0`.
pub fn calibrate_lambda(sol: &PiecewiseShockSolution) -> Result<(f64, f64)> {
    if sol.shock_count() != 1 {
        return Err(Error::InvalidSolution(format!(
            "calibration needs exactly one shock, found {}",
            sol.shock_count()
        )));
    }
    let rate = energy_rate(sol)?;
    let (left, right) = (sol.states()[0], sol.states()[1]);
    let speed = sol.shock_speeds()[0];
    let coefficient = right.u - speed;
    let scale = 1.0 + right.u.abs().max(left.u.abs()).max(speed.abs());
    if coefficient.abs() <= 1e-14 * scale {
        return Err(Error::GaugeOnly(
            "no mass crosses the interface, so only the gauge of lambda is fixed".into(),
        ));
    }
    Ok((0.0, rate / coefficient))
}

/// `dE/dt + dV/dt` using interface contributions only.
pub fn augmented_energy_rate(sol: &PiecewiseShockSolution, map: &FlowMap1D, t: f64) -> Result<f64> {
    Ok(energy_rate(sol)? - neg_v_shock_rate(map, sol, t)?.interface)
}

/// Largest `|v_s [[lambda]] - [[lambda u]]|` over the shocks.
pub fn lambda_jump_residual(map: &FlowMap1D, sol: &PiecewiseShockSolution, t: f64) -> f64 {
    (0..sol.shock_count())
        .map(|i| {
            let (lm, lp) = map.one_sided(i, t);
            let (um, up) = (map.velocities[i], map.velocities[i + 1]);
            (sol.shock_speeds()[i] * (lp - lm) - (lp * up - lm * um)).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest `|v_s [[E - lambda]] - [[(E + p - lambda) u]]|` over the shocks.
pub fn energy_minus_lambda_residual(
    map: &FlowMap1D,
    sol: &PiecewiseShockSolution,
    t: f64,
) -> Result<f64> {
    let model = sol.model();
    let mut worst = 0.0_f64;
    for i in 0..sol.shock_count() {
        let (l, r) = (sol.states()[i], sol.states()[i + 1]);
        let (lm, lp) = map.one_sided(i, t);
        let ql = model.energy_density(&l)? - lm;
        let qr = model.energy_density(&r)? - lp;
        let fl = (ql + model.pressure(&l)?) * l.u;
        let fr = (qr + model.pressure(&r)?) * r.u;
        worst = worst.max((sol.shock_speeds()[i] * (qr - ql) - (fr - fl)).abs());
    }
    Ok(worst)
}

fn check_compatible(map: &FlowMap1D, sol: &PiecewiseShockSolution) -> Result<()> {
    if map.region_count() != sol.states().len() {
        return Err(Error::InvalidSolution("flow map and solution disagree on region count".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::{FluidState, GasModel};
    use crate::shock1d::Domain;
    use approx::assert_relative_eq;

    #[test]
    fn unit_density_gives_unit_lambda() {
        let sol = PiecewiseShockSolution::stationary_example(2.0).unwrap();
        let map = FlowMap1D::uniform(&sol, 1.0);
        assert_eq!(map.lambda_field(0.3, -0.5).unwrap(), 1.0);
        assert_eq!(map.lambda_field(0.3, 0.5).unwrap(), 1.0);
        assert!(matches!(map.lambda_field(0.3, 0.0), Err(Error::OnShock { .. })));
        assert_eq!(FlowMap1D::uniform(&sol, 2.0).lambda_field(1.0, 0.2).unwrap(), 2.0);
    }

    #[test]
    fn lambda_composes_with_inverse_map() {
        let sol = PiecewiseShockSolution::stationary_example(2.0).unwrap();
        let lam = |x: f64| 1.0 + x * x / (1.0 + x * x);
        let map = FlowMap1D::new(
            &sol,
            vec![ReferenceDensity::function(lam), ReferenceDensity::Constant(1.0)],
        )
        .unwrap();
        for (t, x) in [(0.1, -0.4), (0.25, -0.9), (0.0, -0.1)] {
            assert_relative_eq!(map.lambda_field(t, x).unwrap(), lam(x - 2.0 * t), epsilon = 1e-15);
        }
    }

    #[test]
    fn potential_of_stationary_example() {
        let sol = PiecewiseShockSolution::stationary_example(2.0).unwrap();
        let unit = FlowMap1D::uniform(&sol, 1.0);
        assert_relative_eq!(neg_v_shock(&unit, &sol, 0.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_relative_eq!(neg_v_shock(&FlowMap1D::uniform(&sol, 3.0), &sol, 0.0).unwrap(), 6.0);
        let free = sol.clone().with_domain(Domain::free(-1.0, 1.0)).unwrap();
        let unit_free = FlowMap1D::uniform(&free, 1.0);
        assert_relative_eq!(neg_v_shock(&unit_free, &free, 0.1).unwrap(), 1.9, epsilon = 1e-14);

        let rate = neg_v_shock_rate(&unit, &sol, 0.0).unwrap();
        assert_eq!(rate.interface, -1.0);
        // labels stream through the fixed walls and keep the length at 2
        assert_eq!(rate.total(), 0.0);
        let rate_free = neg_v_shock_rate(&unit_free, &free, 0.0).unwrap();
        assert_eq!((rate_free.interface, rate_free.boundary), (-1.0, 0.0));
        assert_eq!(lambda_jump_residual(&unit, &sol, 0.0), 1.0);
    }

    #[test]
    fn calibration_of_stationary_example() {
        let sol = PiecewiseShockSolution::stationary_example(2.0).unwrap();
        let (l, r) = calibrate_lambda(&sol).unwrap();
        assert_eq!(l, 0.0);
        assert_relative_eq!(r, -1.0 / 3.0, epsilon = 1e-14);
        let map = FlowMap1D::calibrated(&sol).unwrap();
        assert!(augmented_energy_rate(&sol, &map, 0.0).unwrap().abs() < 1e-12);
        assert!(energy_minus_lambda_residual(&map, &sol, 0.0).unwrap() < 1e-12);
        let unit = FlowMap1D::uniform(&sol, 1.0);
        assert_relative_eq!(augmented_energy_rate(&sol, &unit, 0.0).unwrap(), 2.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_jump_calibration() {
        let m = GasModel::barotropic(1.0, 1.4).unwrap();
        let s = FluidState::barotropic(1.0, 0.5);
        let sol =
            PiecewiseShockSolution::new(m, vec![s, s], vec![0.0], vec![0.0], Domain::fixed(-1.0, 1.0)).unwrap();
        let map = FlowMap1D::calibrated(&sol).unwrap();
        assert_eq!(calibrate_lambda(&sol).unwrap(), (0.0, 0.0));
        assert_eq!(augmented_energy_rate(&sol, &map, 0.0).unwrap(), 0.0);
        assert_eq!(neg_v_shock_rate(&map, &sol, 0.0).unwrap().interface, 0.0);

        let still = FluidState::barotropic(1.0, 0.0);
        let static_sol =
            PiecewiseShockSolution::new(m, vec![still, still], vec![0.0], vec![0.0], Domain::fixed(-1.0, 1.0))
                .unwrap();
        assert!(matches!(calibrate_lambda(&static_sol), Err(Error::GaugeOnly(_))));
    }
}
