//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::time::Instant;

use rand::Rng;
use shockvar::fv_solver::{locate_shock, measure_shock, project, run, FvOptions, Grid1D};
use shockvar::lagrangian_maps::{augmented_energy_rate, calibrate_lambda, energy_minus_lambda_residual, FlowMap1D};
use shockvar::rh::{entropy_admissible, hugoniot_solve_full, rh_residuals, ShockJump};
use shockvar::shock1d::{energy_rate, length_rate, volume_potential_mismatch};
use shockvar::weakcheck::{
    moving_domain_mass_rate, standard_battery, weak_residual, Component, SpacetimeQuadrature, TestFunction,
};
use shockvar::{FluidState, GasModel, PiecewiseShockSolution};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn example(gamma: f64) -> Result<PiecewiseShockSolution, String> {
    PiecewiseShockSolution::stationary_example(gamma).map_err(err)
}

fn example_reconstruction() -> Check {
    let mut worst = 0.0f64;
    for gamma in [1.2, 1.4, 5.0 / 3.0, 2.0, 3.0] {
        let sol = example(gamma)?;
        let GasModel::BarotropicPolytropic { k, .. } = *sol.model() else {
            return Err("example is not barotropic".into());
        };
        if k != 2.0 / (2f64.powf(gamma) - 1.0) {
            return Err(format!("gamma {gamma}: K = {k}"));
        }
        if sol.shock_speeds()[0] != 0.0 {
            return Err(format!("gamma {gamma}: v_s = {}", sol.shock_speeds()[0]));
        }
        worst = worst.max(rh_residuals(&sol.jump(0), sol.model()).map_err(err)?.mass_momentum_max());
    }
    ensure(worst < 1e-12, format!("max mass/momentum residual {worst:.2e}"))
}

fn energy_dissipation() -> Check {
    let at_two = energy_rate(&example(2.0)?).map_err(err)?;
    if (at_two + 1.0 / 3.0).abs() > 1e-12 {
        return Err(format!("rate at gamma 2 = {at_two}"));
    }
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let gamma = 1.05 + 0.05 * i as f64;
        let rate = energy_rate(&example(gamma)?).map_err(err)?;
        worst = worst.max((rate - common::closed_form_rate(gamma)).abs());
    }
    ensure(worst < 1e-12, format!("rate(2) = {at_two:.15}, sweep deviation {worst:.2e}"))
}

fn length_figure() -> Check {
    let mut worst = 0.0f64;
    for i in 1..=40 {
        let gamma = 1.0 + 0.05 * i as f64;
        worst = worst.max((length_rate(&example(gamma)?) + 1.0).abs());
    }
    ensure(worst < 1e-12, format!("max |length rate + 1| {worst:.2e}"))
}

fn mismatch() -> Check {
    let mut smallest = f64::INFINITY;
    for i in 1..=20 {
        let gamma = 1.0 + 0.1 * i as f64;
        smallest = smallest.min(volume_potential_mismatch(&example(gamma)?).map_err(err)?.gap);
    }
    let at_two = volume_potential_mismatch(&example(2.0)?).map_err(err)?.gap;
    ensure(
        smallest > 0.1 && (at_two - 2.0 / 3.0).abs() < 1e-12,
        format!("min gap {smallest:.4}, gap(2) = {at_two:.15}"),
    )
}

fn calibration() -> Check {
    let mut rng = common::rng(101);
    let (mut aug, mut cons) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let sol = common::random_barotropic_shock(&mut rng);
        calibrate_lambda(&sol).map_err(err)?;
        let map = FlowMap1D::calibrated(&sol).map_err(err)?;
        aug = aug.max(augmented_energy_rate(&sol, &map, 0.0).map_err(err)?.abs());
        cons = cons.max(energy_minus_lambda_residual(&map, &sol, 0.0).map_err(err)?);
    }
    ensure(aug < 1e-12 && cons < 1e-12, format!("max augmented rate {aug:.2e}, max E-lambda residual {cons:.2e}"))
}

fn full_euler() -> Check {
    let mut rng = common::rng(102);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let model = common::random_ideal_gas(&mut rng);
        let left = common::random_ideal_state(&mut rng, &model);
        let g = model.gamma();
        let ratio = 1.0 + rng.gen_range(0.05..0.9) * (((g + 1.0) / (g - 1.0)).min(6.0) - 1.0) * 0.95;
        let rho_r = if rng.gen_bool(0.5) { left.rho * ratio } else { left.rho / ratio };
        let s = hugoniot_solve_full(&left, rho_r, &model).map_err(err)?;
        let right = FluidState::with_entropy(rho_r, s.u_right, s.s_right);
        let jump = ShockJump::new(left, right, 1.0, s.speed).map_err(err)?;
        worst = worst.max(rh_residuals(&jump, &model).map_err(err)?.energy.abs());
        let upstream_is_left = left.rho * (left.u - s.speed) > 0.0;
        let (up, down) = if upstream_is_left { (left, right) } else { (right, left) };
        let raised = model.specific_entropy(&down).map_err(err)? >= model.specific_entropy(&up).map_err(err)?;
        if !raised || !entropy_admissible(&jump, &model).map_err(err)? {
            return Err(format!("entropy decreases across {jump:?}"));
        }
    }
    ensure(worst < 1e-10, format!("max energy residual {worst:.2e}, entropy raised on all 50"))
}

fn oracle_triangle() -> Check {
    let sol = example(2.0)?;
    let d = sol.domain();
    let grid = Grid1D::new(d.x_left, d.x_right, 3200).map_err(err)?;
    let options = FvOptions { t_final: 0.5, ..FvOptions::default() };
    let fv = run(sol.model(), &grid, project(&sol, &grid, 0.0).map_err(err)?, &options).map_err(err)?;
    let residual = measure_shock(sol.model(), &fv, 0.25).map_err(err)?.residuals.norm_for(sol.model());
    let position = locate_shock(sol.model(), &grid, fv.final_field()).map_err(err)?.position;
    let offset = (position - sol.shock_position(0, fv.final_time())).abs() / grid.dx();
    ensure(
        residual < 5e-3 && offset < 2.0 && fv.conservation_drift < 1e-10,
        format!(
            "residual norm {residual:.2e}, drift {offset:.2} cells, conservation {:.2e}",
            fv.conservation_drift
        ),
    )
}

fn weak_battery() -> Check {
    let sol = example(2.0)?;
    let quad = SpacetimeQuadrature::default();
    let mut worst = 0.0f64;
    for h in standard_battery(&sol, 0, 20).map_err(err)? {
        for c in [Component::Mass, Component::Momentum] {
            worst = worst.max(weak_residual(&sol, c, &h, &quad).map_err(err)?.abs());
        }
    }
    let mut states = sol.states().to_vec();
    states[1].u += 0.1;
    let bad = PiecewiseShockSolution::candidate(*sol.model(), states, vec![0.0], vec![0.0], *sol.domain())
        .map_err(err)?;
    let h = TestFunction::new((0.5, 0.05), (0.3, 0.4)).map_err(err)?;
    let detected = weak_residual(&bad, Component::Mass, &h, &quad).map_err(err)?.abs();
    ensure(worst < 1e-8 && detected > 1e-3, format!("max battery residual {worst:.2e}, perturbed {detected:.2e}"))
}

fn equivalence() -> Check {
    let mut rng = common::rng(103);
    let quad = SpacetimeQuadrature::default();
    let mut counterexamples = 0;
    let mut worst_mass = 0.0f64;
    for i in 0..50u64 {
        let exact = common::random_barotropic_shock(&mut rng);
        let delta = if i % 2 == 0 { 0.0 } else { rng.gen_range(0.01..0.5) };
        let mut states = exact.states().to_vec();
        states[1].u += delta / states[1].rho;
        let sol = PiecewiseShockSolution::candidate(
            *exact.model(),
            states,
            exact.shock_positions().to_vec(),
            exact.shock_speeds().to_vec(),
            *exact.domain(),
        )
        .map_err(err)?;
        let rh_ok = rh_residuals(&sol.jump(0), sol.model()).map_err(err)?.mass_momentum_max() < 1e-10;
        let mut weak_ok = true;
        for h in standard_battery(&sol, i, 8).map_err(err)? {
            for c in [Component::Mass, Component::Momentum] {
                weak_ok &= weak_residual(&sol, c, &h, &quad).map_err(err)?.abs() < 1e-8;
            }
        }
        if weak_ok != rh_ok {
            counterexamples += 1;
        }
        let t = 0.1;
        let xs = sol.shock_position(0, t);
        let (ul, ur) = (sol.states()[0].u, sol.states()[1].u);
        let (a0, b0) = (xs - 1.0 - ul * t, xs + 1.0 - ur * t);
        let rate = moving_domain_mass_rate(&sol, |s| a0 + ul * s, |s| b0 + ur * s, t).map_err(err)?;
        worst_mass = worst_mass.max((rate - delta).abs());
    }
    ensure(
        counterexamples == 0 && worst_mass < 1e-6,
        format!("{counterexamples} counterexamples, max mass-rate error {worst_mass:.2e}"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example reconstruction", example_reconstruction),
        ("energy dissipation", energy_dissipation),
        ("length rate", length_figure),
        ("volume mismatch", mismatch),
        ("calibration closure", calibration),
        ("full-Euler energy conservation", full_euler),
        ("oracle triangle", oracle_triangle),
        ("weak-form battery", weak_battery),
        ("weak/jump equivalence", equivalence),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({elapsed:.2}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}. {name}: {detail} ({elapsed:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
