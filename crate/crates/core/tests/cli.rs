use std::path::Path;
use std::process::Command;

use serde_json::Value;
use shockvar::cli::{main_with, run, RunConfig, EXIT_AUDIT_FAILURE, EXIT_NUMERICAL, EXIT_OK, EXIT_PARSE, EXIT_VALIDATION};

fn invoke(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["shockvar"];
    argv.extend_from_slice(args);
    let status = main_with(argv, &mut out);
    (status, String::from_utf8(out).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const EXAMPLE_SOLUTION: &str = r#"
[model]
kind = "barotropic-polytropic"
k = 0.6666666666666666
gamma = 2.0

[solution]
states = [{ rho = 1.0, u = 2.0 }, { rho = 2.0, u = 1.0 }]
shock_positions = [0.0]

[solution.domain]
x_left = -1.0
x_right = 1.0
"#;

#[test]
fn shock_example_reports_the_energy_figures() {
    let (status, out) = invoke(&["shock-example", "--gamma", "2"]);
    assert_eq!(status, EXIT_OK);
    let v = json(&out);
    let r = &v["result"];
    assert!((r["K"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(r["v_s"].as_f64().unwrap(), 0.0);
    assert!((r["dEdt"].as_f64().unwrap() + 1.0 / 3.0).abs() < 1e-12);
    assert!((r["gap"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!(out.contains("6.6666666666666663e-1"));
}

#[test]
fn rh_solve_recovers_the_example_state() {
    let (status, out) = invoke(&[
        "rh-solve", "--rho-left", "1", "--u-left", "2", "--rho-right", "2", "--gamma", "2", "--k", "0.6666666666666666",
    ]);
    assert_eq!(status, EXIT_OK, "{out}");
    let v = json(&out);
    assert!((v["result"]["u_right"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(v["result"]["v_s"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn rh_solve_ideal_gas() {
    let (status, out) =
        invoke(&["rh-solve", "--ideal-gas", "--gamma", "1.4", "--rho-left", "1", "--u-left", "0", "--s-left", "0", "--rho-right", "2"]);
    assert_eq!(status, EXIT_OK, "{out}");
    assert!(json(&out)["result"]["admissible"]["s_right"].as_f64().is_some());
}

#[test]
fn exit_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let no_model = write(dir.path(), "no_model.toml", "[task]\nkind = \"energy-audit\"\n");
    let (status, out) = invoke(&["--config", &no_model]);
    assert_eq!(status, EXIT_VALIDATION);
    assert_eq!(json(&out)["error"]["kind"], "validation");

    let typo = write(dir.path(), "typo.toml", &format!("{EXAMPLE_SOLUTION}\n[tolerances]\nresidul = 1e-10\n"));
    assert_eq!(invoke(&["--config", &typo]).0, EXIT_PARSE);
    assert_eq!(invoke(&["no-such-task"]).0, EXIT_PARSE);

    let (status, out) = invoke(&["rh-solve", "--rho-left", "1", "--u-left", "0", "--s-left", "0", "--rho-right", "9", "--ideal-gas"]);
    assert_eq!(status, EXIT_NUMERICAL, "{out}");
    assert_eq!(json(&out)["status"], EXIT_NUMERICAL);

    let strict = write(
        dir.path(),
        "strict.toml",
        &format!("{EXAMPLE_SOLUTION}\n[task]\nkind = \"energy-audit\"\n\n[tolerances]\nadmissibility = 1e-12\n"),
    );
    assert_eq!(invoke(&["--config", &strict]).0, EXIT_OK);
    let expansion = EXAMPLE_SOLUTION.replace(
        "states = [{ rho = 1.0, u = 2.0 }, { rho = 2.0, u = 1.0 }]",
        "states = [{ rho = 2.0, u = 1.0 }, { rho = 1.0, u = 2.0 }]",
    );
    let bad = write(dir.path(), "expansion.toml", &format!("{expansion}\n[task]\nkind = \"energy-audit\"\n"));
    let (status, out) = invoke(&["--config", &bad]);
    assert_eq!(status, EXIT_AUDIT_FAILURE, "{out}");
    assert_eq!(json(&out)["passed"], false);

    let negative = write(dir.path(), "negative.toml", &format!("{EXAMPLE_SOLUTION}\n[task]\nkind = \"energy-audit\"\n\n[tolerances]\nweak = -1.0\n"));
    assert_eq!(invoke(&["--config", &negative]).0, EXIT_VALIDATION);
    assert_eq!(invoke(&[]).0, EXIT_VALIDATION);
}

#[test]
fn summaries_are_deterministic_and_configs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let (status, _) = invoke(&["--out-dir", out.to_str().unwrap(), "--format", "json,csv", "weak-verify", "--bumps", "4"]);
        assert_eq!(status, EXIT_OK);
    }
    let a = std::fs::read(out_a.join("summary.json")).unwrap();
    assert_eq!(a, std::fs::read(out_b.join("summary.json")).unwrap());
    assert!(out_a.join("summary.csv").exists());
    let table = std::fs::read_to_string(out_a.join("weak_residuals.csv")).unwrap();
    assert!(table.starts_with("bump,t0,x0,r_t,r_x,component,residual"));
    assert_eq!(table.lines().count(), 1 + 4 * 2);

    let emitted = std::fs::read_to_string(out_a.join("run_config.toml")).unwrap();
    let config = RunConfig::from_toml(&emitted).unwrap();
    assert_eq!(RunConfig::from_toml(&config.to_toml().unwrap()).unwrap(), config);
    let rerun = run(&config).unwrap();
    assert_eq!(shockvar::cli::to_json(&rerun.summary).into_bytes(), a);
}

#[test]
fn fv_run_writes_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "fv.toml",
        &format!("{EXAMPLE_SOLUTION}\n[task]\nkind = \"fv-run\"\ncells = 100\nt_final = 0.2\nsnapshots = 4\n"),
    );
    let out = dir.path().join("out");
    let (status, text) = invoke(&["--config", &config, "--out-dir", out.to_str().unwrap(), "fv-run"]);
    assert_eq!(status, EXIT_OK, "{text}");
    let v = json(&text);
    assert!(v["result"]["conservation_drift"].as_f64().unwrap() < 1e-10);
    assert!(v["result"]["shock_position_series"].as_array().unwrap().len() >= 4);
    assert!(v["result"]["measured_residuals"]["mass"].is_number());
    let csv = std::fs::read_to_string(out.join("fv_snapshots.csv")).unwrap();
    assert!(csv.starts_with("t,x,rho,u\n"));
    assert_eq!(csv.lines().count(), 1 + 5 * 100);

    let (status, _) = invoke(&["--config", &config, "weak-verify"]);
    assert_eq!(status, EXIT_VALIDATION);
    let (status, _) = invoke(&["--config", &config, "fv-run", "--cells", "10"]);
    assert_eq!(status, EXIT_VALIDATION);
}

#[test]
fn energy_audit_keys() {
    let (status, out) = invoke(&["energy-audit", "--gamma", "2"]);
    assert_eq!(status, EXIT_OK);
    let r = &json(&out)["result"];
    for key in ["dEdt", "neg_dVdt_volume", "gap", "lambda_calibrated", "augmented_rate"] {
        assert!(!r[key].is_null(), "missing {key}");
    }
    assert!((r["neg_dVdt_volume"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!(r["augmented_rate"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_shockvar");
    let ok = Command::new(bin).args(["shock-example", "--gamma", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(json(&String::from_utf8(ok.stdout).unwrap())["passed"].as_bool().unwrap());
    let bad = Command::new(bin).args(["shock-example", "--gamma", "0.5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_VALIDATION));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}
