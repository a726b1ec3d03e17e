use proptest::prelude::*;
use shockvar::{FluidState, GasModel};

fn legendre_pressure(model: &GasModel, state: &FluidState) -> f64 {
    let l = |rho: f64, s: Option<f64>| model.lagrangian_density(&FluidState { rho, s, ..*state }).unwrap();
    let h = 1e-5 * state.rho;
    let l_rho = (l(state.rho + h, state.s) - l(state.rho - h, state.s)) / (2.0 * h);
    let l_s = match state.s {
        Some(s) => {
            let hs = 1e-5 * (1.0 + s.abs());
            (l(state.rho, Some(s + hs)) - l(state.rho, Some(s - hs))) / (2.0 * hs)
        }
        None => 0.0,
    };
    l(state.rho, state.s) - state.rho * l_rho - state.s.unwrap_or(0.0) * l_s
}

fn barotropic_case() -> impl Strategy<Value = (GasModel, FluidState)> {
    (0.1f64..5.0, 1.05f64..3.0, 0.05f64..10.0, -5.0f64..5.0)
        .prop_map(|(k, g, rho, u)| (GasModel::barotropic(k, g).unwrap(), FluidState::barotropic(rho, u)))
}

fn ideal_case() -> impl Strategy<Value = (GasModel, FluidState)> {
    (1.05f64..3.0, 0.1f64..5.0, 0.1f64..5.0, 0.05f64..10.0, -5.0f64..5.0, -2.0f64..2.0).prop_map(
        |(g, e_ref, c_v, rho, u, big_s)| {
            (GasModel::ideal_gas(g, e_ref, c_v).unwrap(), FluidState::with_entropy(rho, u, rho * big_s))
        },
    )
}

fn any_case() -> impl Strategy<Value = (GasModel, FluidState)> {
    prop_oneof![barotropic_case(), ideal_case()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pressure_is_the_legendre_transform((model, state) in any_case()) {
        let p = model.pressure(&state).unwrap();
        let fd = legendre_pressure(&model, &state);
        prop_assert!((p - fd).abs() <= 1e-6 * p.abs().max(1e-3), "p = {p}, finite difference {fd}");
    }

    #[test]
    fn energies_are_ordered((model, state) in any_case()) {
        let internal = model.internal_energy_density(&state).unwrap();
        let total = model.energy_density(&state).unwrap();
        prop_assert!(internal >= 0.0);
        prop_assert!(total >= internal);
        prop_assert!((total - internal - 0.5 * state.rho * state.u * state.u).abs() <= 1e-12 * total.max(1.0));
    }

    #[test]
    fn temperature_and_sound_speed_are_positive((model, state) in ideal_case()) {
        prop_assert!(model.temperature(&state).unwrap() > 0.0);
        let c = model.sound_speed(&state).unwrap();
        let p = model.pressure(&state).unwrap();
        prop_assert!((c * c - model.gamma() * p / state.rho).abs() <= 1e-12 * c * c);
    }

    #[test]
    fn temperature_is_the_entropy_derivative((model, state) in ideal_case()) {
        let s = state.s.unwrap();
        let h = 1e-6 * (1.0 + s.abs());
        let eps = |s: f64| model.internal_energy_raw(state.rho, s);
        let fd = (eps(s + h) - eps(s - h)) / (2.0 * h);
        let t = model.temperature(&state).unwrap();
        prop_assert!((t - fd).abs() <= 1e-6 * t.max(1e-3));
    }

    #[test]
    fn conserved_round_trip((model, state) in any_case()) {
        let e = model.energy_density(&state).unwrap();
        let back = model.state_from_conserved(state.rho, state.momentum(), e).unwrap();
        prop_assert!((back.u - state.u).abs() <= 1e-12 * (1.0 + state.u.abs()));
        if let (Some(a), Some(b)) = (back.s, state.s) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn barotropic_sound_speed_grows_with_density((model, state) in barotropic_case()) {
        let denser = FluidState { rho: state.rho * 1.5, ..state };
        prop_assert!(model.sound_speed(&denser).unwrap() > model.sound_speed(&state).unwrap());
    }
}

#[test]
fn model_mismatch_is_rejected() {
    let baro = GasModel::barotropic(1.0, 1.4).unwrap();
    let ideal = GasModel::ideal_gas(1.4, 1.0, 1.0).unwrap();
    assert!(baro.pressure(&FluidState::with_entropy(1.0, 0.0, 0.1)).is_err());
    assert!(ideal.pressure(&FluidState::barotropic(1.0, 0.0)).is_err());
    assert!(baro.temperature(&FluidState::barotropic(1.0, 0.0)).is_err());
    assert!(GasModel::barotropic(1.0, 1.0).is_err());
    assert!(GasModel::ideal_gas(1.4, -1.0, 1.0).is_err());
}
