use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_banach-ortho");
const RANK_ONE: &str = r#"{"n":2,"field":"real","columns":[[1,-1],[2,-2]]}"#;
const BASIC_C2: &str = r#"{"n":2,"field":"complex","columns":[[[0,7],[1,0]],[[2,0],[0,3]]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("BANACH_ORTHO_SEED").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn real(entries: &[f64]) -> String {
    serde_json::json!({"field": "real", "entries": entries}).to_string()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn negative_check_exits_one_with_witness() {
    let out = run(&["check", "--operator", RANK_ONE, "--x", &real(&[1.0, 1.0]), "--y", &real(&[1.0, 0.0])]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], false);
    // (Tx, y) = y^T M x with M x = (3, -3)
    assert_eq!(v["witness"][0].as_f64(), Some(3.0));
}

#[test]
fn positive_check_exits_zero() {
    let out = run(&["check", "--operator", RANK_ONE, "--x", &real(&[1.0, 0.0]), "--y", &real(&[1.0, 1.0])]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], true);
}

#[test]
fn operator_read_from_file() {
    let path = temp_file("rank_one.json", RANK_ONE);
    let out = run(&[
        "check",
        "--operator",
        path.to_str().unwrap(),
        "--x",
        &real(&[1.0, 0.0]),
        "--y",
        &real(&[1.0, 1.0]),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two_with_empty_stdout() {
    let cases: Vec<Vec<String>> = vec![
        vec!["check".into(), "--operator".into(), "{bad".into(), "--x".into(), real(&[1.0]), "--y".into(), real(&[1.0])],
        vec![
            "check".into(),
            "--operator".into(),
            RANK_ONE.into(),
            "--x".into(),
            real(&[1.0, 1.0, 1.0]),
            "--y".into(),
            real(&[1.0, 0.0]),
        ],
        vec!["check".into(), "--operator".into(), "/nonexistent/op.json".into(), "--x".into(), real(&[1.0]), "--y".into(), real(&[1.0])],
        vec!["verify".into(), "--suite".into(), "nope".into()],
        vec!["fixtures".into(), "--name".into(), "nope".into()],
        vec!["bogus".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn bj_and_isosceles_relations() {
    let space = r#"{"n":2,"p":2,"field":"real"}"#;
    for relation in ["bj", "isosceles"] {
        let out = run(&["check", "--relation", relation, "--space", space, "--x", &real(&[1.0, 2.0]), "--y", &real(&[2.0, -1.0])]);
        assert_eq!(out.status.code(), Some(0), "{relation}");
        let out = run(&["check", "--relation", relation, "--space", space, "--x", &real(&[1.0, 2.0]), "--y", &real(&[1.0, 0.0])]);
        assert_eq!(out.status.code(), Some(1), "{relation}");
    }
}

#[test]
fn symmetry_at_isotropic_kernel_point() {
    let out = run(&["symmetry", "--operator", RANK_ONE, "--x", &real(&[1.0, 1.0])]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["left"], true);
    assert_eq!(v["right"], false);
}

#[test]
fn symmetry_with_direction() {
    let x = r#"{"field":"complex","entries":[[1,0],[0,0]]}"#;
    let out = run(&["symmetry", "--operator", BASIC_C2, "--x", x, "--theta", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["left"], false);
    assert_eq!(v["theta_left"], false);
    assert!(v.get("theta").is_some());
}

#[test]
fn isometry_of_rotation_for_identity_pairing() {
    let id = r#"{"n":2,"field":"real","columns":[[1,0],[0,1]]}"#;
    let rot = r#"{"n":2,"field":"real","columns":[[0,1],[-1,0]]}"#;
    let out = run(&["isometry", "--operator", id, "--endo", rot]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isometry"], true);
    assert!(v["deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn preserve_reports_beta_and_class() {
    let id = r#"{"n":2,"field":"real","columns":[[1,0],[0,1]]}"#;
    let twice_rot = r#"{"n":2,"field":"real","columns":[[0,2],[-2,0]]}"#;
    let out = run(&["preserve", "--operator", id, "--endo", twice_rot, "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // M = beta A^T M A with A^T A = 4 I
    assert!((v["beta"][0].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["classification"]["class"], "isometry_multiple");
    assert_eq!(v["seed"], 42);
}

#[test]
fn hilbert_fit_output_keys() {
    let out = run(&["hilbert-fit", "--space", r#"{"n":2,"p":3,"field":"real"}"#, "--trials", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["m_fit", "residual", "samples", "p", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["samples"], 40);
}

#[test]
fn fixture_by_name() {
    let out = run(&["fixtures", "--name", "lemma-counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total"], 1);
    assert_eq!(v["fixtures"][0]["name"], "lemma-counterexample");
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--suite", "basic", "--trials", "40", "--seed", "5"]);
    let b = run(&["verify", "--suite", "basic", "--trials", "40", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_env_and_flag_precedence() {
    let with_env = |args: &[&str]| {
        Command::new(BIN).args(args).env("BANACH_ORTHO_SEED", "7").output().unwrap()
    };
    let v = json(&with_env(&["verify", "--suite", "basic", "--trials", "5"]));
    assert_eq!(v["seed"], 7);
    let v = json(&with_env(&["verify", "--suite", "basic", "--trials", "5", "--seed", "9"]));
    assert_eq!(v["seed"], 9);
    let v = json(&run(&["verify", "--suite", "basic", "--trials", "5"]));
    assert_eq!(v["seed"], 42);
    let bad = Command::new(BIN)
        .args(["verify", "--suite", "basic", "--trials", "5"])
        .env("BANACH_ORTHO_SEED", "soon")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn help_goes_to_stdout() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("hilbert-fit"));
}
