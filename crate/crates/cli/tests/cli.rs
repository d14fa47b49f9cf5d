use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_canonlab"))
}

struct Run {
    code: i32,
    out: PathBuf,
    _dir: tempfile::TempDir,
}

fn run_with(cmd: &str, config: &str, extra: &[&str], files: &[(&str, String)]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(&cfg, config).unwrap();
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    let out = dir.path().join("out");
    let status = bin()
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .status()
        .unwrap();
    Run {
        code: status.code().unwrap(),
        out,
        _dir: dir,
    }
}

fn run(cmd: &str, config: &str) -> Run {
    run_with(cmd, config, &[], &[])
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn hamiltonian_of_zero_potential() {
    let r = run(
        "hamiltonian",
        r#"{"name": "q0", "system": {"kind": "wave-potential", "q": "q_zero"},
            "grid": {"x_max": 4, "h": 0.01, "t_max": 1}}"#,
    );
    assert_eq!(r.code, 0);
    let rows = csv(&r.out.join("q0/hamiltonian.csv"));
    let row = rows.iter().find(|c| c[0] == "2").expect("row at x = 2");
    let h: Vec<f64> = row[1..5].iter().map(|v| v.parse().unwrap()).collect();
    for (got, want) in h.iter().zip([1.0, 2.0, 2.0, 4.0]) {
        assert!((got - want).abs() < 1e-10, "{h:?}");
    }
    assert_eq!(json(&r.out.join("q0/hamiltonian.json"))["schema_version"], 1);
}

#[test]
fn density_eikonal_column() {
    let r = run(
        "hamiltonian",
        r#"{"name": "rho", "system": {"kind": "wave-density", "rho": "rho_quad"},
            "grid": {"x_max": 2, "h": 0.001, "t_max": 1}}"#,
    );
    assert_eq!(r.code, 0);
    for row in csv(&r.out.join("rho/hamiltonian.csv")) {
        let x: f64 = row[0].parse().unwrap();
        let tau: f64 = row[7].parse().unwrap();
        assert!((tau - (x + x * x / 2.0)).abs() < 1e-8, "{x}: {tau}");
    }
    assert!(r.out.join("rho/reduction.csv").is_file());
}

#[test]
fn missing_coefficient_file_is_an_input_error() {
    let r = run(
        "hamiltonian",
        r#"{"system": {"kind": "wave-potential", "q": {"file": "nowhere.txt"}},
            "grid": {"x_max": 1, "h": 0.01, "t_max": 1}}"#,
    );
    assert_eq!(r.code, 2);
}

#[test]
fn coefficient_file_is_read_relative_to_config() {
    let q: String = (0..101).map(|_| "0\n").collect();
    let r = run_with(
        "hamiltonian",
        r#"{"name": "f", "system": {"kind": "wave-potential", "q": {"file": "q.txt"}},
            "grid": {"x_max": 1, "n_points": 101, "t_max": 1}}"#,
        &[],
        &[("q.txt", q)],
    );
    assert_eq!(r.code, 0);
}

const WAVE_PAIR: &str = r#"{"name": "pair", "system": {"kind": "wave-potential", "q": "q_zero"},
    "grid": {"x_max": 2.2, "h": 0.0025, "t_max": 2},
    "control": {"kind": "bump", "center": 1.0, "width": 0.9}"#;

#[test]
fn free_wave_pair_is_equivalent() {
    let r = run("equivalence", &format!("{WAVE_PAIR}}}"));
    assert_eq!(r.code, 0);
    let rep = json(&r.out.join("pair/equivalence.json"));
    assert!(rep["discrepancy"].as_f64().unwrap() < 1e-3);
    assert_eq!(rep["passed"], true);
}

#[test]
fn mismatched_potential_fails_the_gate() {
    let cfg = format!(
        r#"{WAVE_PAIR}, "equivalence": {{"canonical_side": {{"kind": "wave-potential", "q": "q_const:1"}}}}}}"#
    );
    let r = run("equivalence", &cfg);
    assert_eq!(r.code, 1);
    assert_eq!(json(&r.out.join("pair/equivalence.json"))["passed"], false);
}

#[test]
fn free_dirac_pair_is_equivalent() {
    let r = run(
        "equivalence",
        r#"{"name": "d", "system": {"kind": "dirac", "p": "dirac_free", "q": "dirac_free"},
            "grid": {"x_max": 2.2, "h": 0.0025, "t_max": 2},
            "control": {"kind": "bump", "center": 1.0, "width": 0.9}}"#,
    );
    assert_eq!(r.code, 0);
}

#[test]
fn density_pair_converges() {
    let d = |h: f64| {
        let r = run(
            "equivalence",
            &format!(
                r#"{{"name": "r", "system": {{"kind": "wave-density", "rho": "rho_quad"}},
                    "grid": {{"x_max": 2.2, "h": {h}, "t_max": 1}}, "tolerance": 1,
                    "control": {{"kind": "bump", "center": 0.5, "width": 0.4}}}}"#
            ),
        );
        json(&r.out.join("r/equivalence.json"))["discrepancy"].as_f64().unwrap()
    };
    let (a, b) = (d(0.005), d(0.0025));
    assert!(b < 2e-3 && a / b > 3.5, "{a} {b}");
}

#[test]
fn jacobi_has_no_equivalence_pair() {
    let r = run(
        "equivalence",
        r#"{"system": {"kind": "jacobi-continuous", "jacobi": "jacobi_quarter_turns"},
            "grid": {"x_max": 1, "h": 0.1, "t_max": 1}}"#,
    );
    assert_eq!(r.code, 2);
}

#[test]
fn half_identity_debranges() {
    let r = run(
        "debranges",
        r#"{"name": "e", "system": {"kind": "canonical-i", "h": "H_half_identity"},
            "grid": {"x_max": 2, "n_points": 1601, "t_max": 1}, "seed": 3,
            "debranges": {"lambda_n": 81}}"#,
    );
    assert_eq!(r.code, 0);
    for row in csv(&r.out.join("e/sweep.csv")) {
        let v: Vec<f64> = row.iter().map(|s| s.parse().unwrap()).collect();
        let (c, s) = (v[0].cos(), -v[0].sin());
        assert!(((v[1] - c).powi(2) + (v[2] - s).powi(2)).sqrt() < 1e-8, "{v:?}");
    }
    let k = json(&r.out.join("e/kernel.json"));
    assert_eq!(k["gram"]["points"].as_array().unwrap().len(), 10);
    assert_eq!(k["gram"]["psd"]["psd"], true);
    assert_eq!(json(&r.out.join("e/hb.json"))["hb"]["passed"], true);
}

#[test]
fn empty_lambda_grid_is_an_input_error() {
    let r = run(
        "debranges",
        r#"{"system": {"kind": "canonical-i", "h": "H_half_identity"},
            "grid": {"x_max": 1, "n_points": 101, "t_max": 1}, "debranges": {"lambda_n": 0}}"#,
    );
    assert_eq!(r.code, 2);
}

#[test]
fn free_bc_operators() {
    let r = run(
        "bcmethod",
        r#"{"name": "free", "system": {"kind": "canonical-i", "h": "H_half_identity"},
            "grid": {"x_max": 1.12, "h": 0.01, "t_max": 0.5}}"#,
    );
    assert_eq!(r.code, 0);
    let rep = json(&r.out.join("free/bcmethod.json"));
    assert!(rep["connecting"]["distance_to_twice_identity"].as_f64().unwrap() < 0.1);
    assert!(rep["controllability"]["ratio"].as_f64().unwrap() >= 0.9);
    assert!(rep["defect"]["defect"].as_f64().unwrap() >= 0.3);
    assert_eq!(rep["passed"], true);
    assert!(r.out.join("free/singular_values.csv").is_file());
    assert!(r.out.join("free/bt_element.csv").is_file());
}

#[test]
fn smooth_bc_operators() {
    let r = run(
        "bcmethod",
        r#"{"name": "s", "system": {"kind": "dirac-type", "d1": 0.7, "d2": 0.35, "psi": 0.4},
            "grid": {"x_max": 2.0, "h": 0.01, "t_max": 0.5}}"#,
    );
    assert_eq!(r.code, 0);
    let rep = json(&r.out.join("s/bcmethod.json"));
    assert_eq!(rep["controllability"]["passed"], true);
    assert!(rep["defect"]["defect"].as_f64().unwrap() >= 0.3);
}

#[test]
fn bcmethod_rejects_rank_one_systems() {
    let r = run(
        "bcmethod",
        r#"{"system": {"kind": "wave-potential", "q": "q_zero"}, "grid": {"x_max": 1, "h": 0.01, "t_max": 0.3}}"#,
    );
    assert_eq!(r.code, 2);
}

const BATCH: &str = r#"{"schema_version": 1, "scenarios": [
    {"name": "a", "system": {"kind": "canonical-i", "h": "H_half_identity"},
     "grid": {"x_max": 1, "n_points": 201, "t_max": 1}, "seed": 11},
    {"name": "b", "system": {"kind": "wave-density", "rho": "rho_quad"},
     "grid": {"x_max": 1, "n_points": 201, "t_max": 1}, "seed": 12}]}"#;

#[test]
fn reports_are_deterministic_across_jobs() {
    let r1 = run_with("debranges", BATCH, &["--jobs", "1"], &[]);
    let r2 = run_with("debranges", BATCH, &["--jobs", "2"], &[]);
    assert_eq!((r1.code, r2.code), (0, 0));
    for f in ["a/debranges.json", "a/kernel.json", "b/hb.json", "b/sweep.csv"] {
        let a = std::fs::read(r1.out.join(f)).unwrap();
        let b = std::fs::read(r2.out.join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn unsupported_schema_version() {
    let r = run("hamiltonian", &BATCH.replace("\"schema_version\": 1", "\"schema_version\": 9"));
    assert_eq!(r.code, 2);
}

#[test]
fn nonpositive_tolerance_rejected() {
    let r = run(
        "hamiltonian",
        r#"{"system": {"kind": "wave-potential", "q": 0.5}, "grid": {"x_max": 1, "h": 0.1, "t_max": 1}, "tolerance": 0}"#,
    );
    assert_eq!(r.code, 2);
}

#[test]
fn simulate_exports_traces() {
    for (name, sys, t_max, center, width) in [
        ("wave", r#"{"kind": "wave-potential", "q": "q_const:1"}"#, 1, 0.5, 0.3),
        ("jc", r#"{"kind": "jacobi-continuous", "jacobi": "jacobi_quarter_turns:12"}"#, 1, 0.5, 0.3),
        (
            "jd",
            r#"{"kind": "jacobi-discrete", "n": 4, "jacobi": {"lengths": [0.7, 1.3, 0.9, 1.1, 0.6, 1.0],
                "angles": [0.0, 1.1, 2.0, 2.5, 3.9, 4.4]}}"#,
            12,
            6.0,
            4.0,
        ),
        ("dt", r#"{"kind": "dirac-type", "d1": 0.5, "d2": 0.5, "psi": 0}"#, 1, 0.5, 0.3),
    ] {
        let r = run(
            "simulate",
            &format!(
                r#"{{"name": "{name}", "system": {sys}, "grid": {{"x_max": 2.5, "h": 0.01, "t_max": {t_max}, "record_every": 10}},
                    "control": {{"kind": "bump", "center": {center}, "width": {width}}}}}"#
            ),
        );
        assert_eq!(r.code, 0, "{name}");
        let rep = json(&r.out.join(format!("{name}/simulate.json")));
        assert_eq!(rep["schema_version"], 1);
        assert!(rep["response_max"].as_f64().unwrap() > 0.0, "{name}");
        assert!(r.out.join(format!("{name}/response.csv")).is_file());
    }
}

#[test]
fn discrete_jacobi_needs_two_steps() {
    let r = run(
        "simulate",
        r#"{"system": {"kind": "jacobi-discrete", "jacobi": "jacobi_quarter_turns"},
            "grid": {"x_max": 1, "h": 0.1, "t_max": 1}}"#,
    );
    assert_eq!(r.code, 2);
}

#[test]
fn quarter_turns_are_singular_in_discrete_time() {
    // q = 0, rho = 1: the implicit step matrix has a vanishing second pivot
    let r = run(
        "simulate",
        r#"{"system": {"kind": "jacobi-discrete", "jacobi": "jacobi_quarter_turns"},
            "grid": {"x_max": 1, "h": 0.1, "t_max": 6}}"#,
    );
    assert_eq!(r.code, 2);
}
