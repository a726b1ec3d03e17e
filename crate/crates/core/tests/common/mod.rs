#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shockvar::rh::hugoniot_solve_barotropic;
use shockvar::{Domain, FluidState, GasModel, PiecewiseShockSolution};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn closed_form_rate(gamma: f64) -> f64 {
    -3.0 + 2.0 * gamma / (gamma - 1.0) - 2.0 * gamma / ((gamma - 1.0) * (2f64.powf(gamma) - 1.0))
}

/// Roots of `g` on `[lo, hi]` by sampling `n` points and bisecting every sign
/// change.
pub fn scan_roots<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let mut roots = Vec::new();
    for w in xs.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            roots.push(a);
            continue;
        }
        if ga.signum() == gb.signum() || !ga.is_finite() || !gb.is_finite() {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if g(m).signum() == ga.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

/// Brute-force barotropic Hugoniot roots `(u_R, v_s)`: the mass condition
/// gives `v_s(u_R)` and the momentum residual is scanned over `u_R`.
pub fn grid_scan_barotropic(left: &FluidState, rho_r: f64, model: &GasModel) -> Vec<(f64, f64)> {
    let p = |rho: f64| model.pressure(&FluidState::barotropic(rho, 0.0)).unwrap();
    let (rl, ul, pl, pr) = (left.rho, left.u, p(left.rho), p(rho_r));
    let speed = move |ur: f64| (rho_r * ur - rl * ul) / (rho_r - rl);
    let g = |ur: f64| {
        let v = speed(ur);
        v * (rho_r * ur - rl * ul) - ((rho_r * ur * ur + pr) - (rl * ul * ul + pl))
    };
    let c = (model.sound_speed(left).unwrap() + model.sound_speed(&FluidState::barotropic(rho_r, 0.0)).unwrap())
        .max(1.0);
    let width = 20.0 * c * (1.0 + (rho_r / rl).max(rl / rho_r));
    scan_roots(g, ul - width, ul + width, 20_000).into_iter().map(|ur| (ur, speed(ur))).collect()
}

/// Brute-force ideal-gas Hugoniot roots `(u_R, s_R, v_s)`: mass gives
/// `v_s(u_R)`, momentum gives `p_R(u_R)`, and the energy residual is scanned.
pub fn grid_scan_full(left: &FluidState, rho_r: f64, model: &GasModel) -> Vec<(f64, f64, f64)> {
    let gamma = model.gamma();
    let (rl, ul) = (left.rho, left.u);
    let pl = model.pressure(left).unwrap();
    let el = model.energy_density(left).unwrap();
    let speed = move |ur: f64| (rho_r * ur - rl * ul) / (rho_r - rl);
    let pressure = move |ur: f64| {
        let v = speed(ur);
        v * (rho_r * ur - rl * ul) - rho_r * ur * ur + rl * ul * ul + pl
    };
    let g = |ur: f64| {
        let (v, pr) = (speed(ur), pressure(ur));
        let er = 0.5 * rho_r * ur * ur + pr / (gamma - 1.0);
        v * (er - el) - ((er + pr) * ur - (el + pl) * ul)
    };
    let c = model.sound_speed(left).unwrap().max(1.0);
    let width = 20.0 * c * (1.0 + (rho_r / rl).max(rl / rho_r));
    scan_roots(g, ul - width, ul + width, 20_000)
        .into_iter()
        .filter(|ur| pressure(*ur) > 0.0 && (ur - ul).abs() > 1e-9)
        .map(|ur| {
            let state = model.state_from_pressure(rho_r, ur, pressure(ur)).unwrap();
            (ur, state.s.unwrap(), speed(ur))
        })
        .collect()
}

pub fn random_barotropic_model<R: Rng>(rng: &mut R) -> GasModel {
    GasModel::barotropic(rng.gen_range(0.2..3.0), rng.gen_range(1.1..3.0)).unwrap()
}

/// Polytrope and states of order one, so that fluxes stay O(10) and absolute
/// round-off sits well below `1e-12`.
pub fn moderate_barotropic_model<R: Rng>(rng: &mut R) -> GasModel {
    GasModel::barotropic(rng.gen_range(0.3..1.5), rng.gen_range(1.1..2.5)).unwrap()
}

/// Random admissible single-shock barotropic solution on `[-4, 4]`.
pub fn random_barotropic_shock<R: Rng>(rng: &mut R) -> PiecewiseShockSolution {
    loop {
        let model = moderate_barotropic_model(rng);
        let left = FluidState::barotropic(rng.gen_range(0.5..1.5), rng.gen_range(-1.0..1.0));
        let ratio = rng.gen_range(1.05..2.5);
        let rho_r = if rng.gen_bool(0.5) { left.rho * ratio } else { left.rho / ratio };
        let Ok(shock) = hugoniot_solve_barotropic(&left, rho_r, &model) else { continue };
        let right = FluidState::barotropic(rho_r, shock.u_right);
        if let Ok(sol) = PiecewiseShockSolution::new(
            model,
            vec![left, right],
            vec![rng.gen_range(-0.2..0.2)],
            vec![shock.speed],
            Domain::fixed(-4.0, 4.0),
        ) {
            return sol;
        }
    }
}

pub fn random_ideal_gas<R: Rng>(rng: &mut R) -> GasModel {
    GasModel::ideal_gas(rng.gen_range(1.1..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)).unwrap()
}

pub fn random_ideal_state<R: Rng>(rng: &mut R, model: &GasModel) -> FluidState {
    model
        .state_from_pressure(rng.gen_range(0.3..3.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.3..3.0))
        .unwrap()
}
