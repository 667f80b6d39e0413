//! The `banach-ortho` command line.
//!
//! Every command prints one JSON document on stdout; diagnostics go to
//! stderr. Arguments naming a space, operator or vector accept either a path
//! to a JSON file or the JSON text itself.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::fixtures;
use crate::preserve::{
    adjoint_conjugate, classify_preserver, hilbert_fit, is_t_isometry, preserver_scalar,
    preserves_t_orthogonality_sampled, EndoOperator,
};
use crate::symmetry::{is_theta_left_symmetric_at, symmetry_at};
use crate::verify;
use crate::{PNormSpace, PairingOperator, ThetaDirection, Vector, DEFAULT_TOL};

pub const SEED_ENV: &str = "BANACH_ORTHO_SEED";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 500;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "banach-ortho", version, about = "T-orthogonality and Birkhoff-James orthogonality on l_p^n")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide one orthogonality relation between x and y (exit 0 yes, 1 no)
    Check(CheckArgs),
    /// Left/right symmetry of T-orthogonality at x
    Symmetry(SymmetryArgs),
    /// Whether A is a T-isometry, i.e. A^T M A = M
    Isometry(EndoArgs),
    /// Whether A preserves T-orthogonality in both directions
    Preserve(PreserveArgs),
    /// Fit a pairing to sampled Birkhoff-James orthogonal pairs
    HilbertFit(FitArgs),
    /// Run a randomized property suite (exit 0 iff no theorem fails)
    Verify(VerifyArgs),
    /// Replay the hand-worked example operators (exit 0 iff all reproduce)
    Fixtures(FixtureArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    T,
    TTheta,
    Bj,
    Isosceles,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum, default_value = "t")]
    relation: Relation,
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    operator: Option<String>,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct SymmetryArgs {
    #[arg(long)]
    operator: String,
    #[arg(long)]
    x: String,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct EndoArgs {
    #[arg(long)]
    operator: String,
    /// The map A as {"n", "field", "columns"}
    #[arg(long)]
    endo: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct PreserveArgs {
    #[command(flatten)]
    endo: EndoArgs,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sampled orthogonal pairs
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    #[arg(long)]
    name: Option<String>,
}

/// An input problem, reported on stderr with exit code 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = std::result::Result<(Value, i32), InputError>;

fn load<T: DeserializeOwned>(what: &str, arg: &str) -> std::result::Result<T, InputError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| InputError(format!("{what}: cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| InputError(format!("{what}: {e}")))
}

fn required<'a>(what: &str, v: &'a Option<String>) -> std::result::Result<&'a str, InputError> {
    v.as_deref().ok_or_else(|| InputError(format!("--{what} is required for this relation")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn seed_or_default(flag: Option<u64>) -> std::result::Result<u64, InputError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| InputError(format!("{SEED_ENV}={s:?} is not a 64-bit seed"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn check(a: &CheckArgs) -> Outcome {
    let x: Vector = load("x", &a.x)?;
    let y: Vector = load("y", &a.y)?;
    let result = match a.relation {
        Relation::T => {
            let t: PairingOperator = load("operator", required("operator", &a.operator)?)?;
            t.is_t_orthogonal(&x, &y, a.tol)?
        }
        Relation::TTheta => {
            let t: PairingOperator = load("operator", required("operator", &a.operator)?)?;
            let theta = a.theta.ok_or_else(|| InputError("--theta is required for t-theta".into()))?;
            t.is_t_theta_orthogonal(ThetaDirection::new(theta), &x, &y, a.tol)?
        }
        Relation::Bj => {
            let s: PNormSpace = load("space", required("space", &a.space)?)?;
            s.is_bj_orthogonal(&x, &y, a.tol)?
        }
        Relation::Isosceles => {
            let s: PNormSpace = load("space", required("space", &a.space)?)?;
            s.is_isosceles_orthogonal(&x, &y, a.tol)?
        }
    };
    let code = if result.verdict { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((to_value(&result), code))
}

fn symmetry(a: &SymmetryArgs) -> Outcome {
    let t: PairingOperator = load("operator", &a.operator)?;
    let x: Vector = load("x", &a.x)?;
    let mut out = to_value(&symmetry_at(&t, &x, a.tol)?);
    if let Some(theta) = a.theta {
        let theta_left = is_theta_left_symmetric_at(&t, ThetaDirection::new(theta), &x, a.tol)?;
        out["theta"] = json!(theta);
        out["theta_left"] = json!(theta_left);
    }
    Ok((out, EXIT_OK))
}

fn isometry(a: &EndoArgs) -> Outcome {
    let t: PairingOperator = load("operator", &a.operator)?;
    let endo: EndoOperator = load("endo", &a.endo)?;
    let pulled = adjoint_conjugate(&t, &endo)?;
    let deviation = (pulled.matrix() - t.matrix()).norm() / t.matrix().norm().max(f64::MIN_POSITIVE);
    Ok((
        json!({
            "isometry": is_t_isometry(&t, &endo, a.tol)?,
            "deviation": deviation,
            "adjoint_conjugate": pulled,
        }),
        EXIT_OK,
    ))
}

fn preserve(a: &PreserveArgs) -> Outcome {
    let t: PairingOperator = load("operator", &a.endo.operator)?;
    let endo: EndoOperator = load("endo", &a.endo.endo)?;
    let seed = seed_or_default(a.seed)?;
    let tol = a.endo.tol;
    let beta = preserver_scalar(&t, &endo, tol)?;
    Ok((
        json!({
            "beta": beta.map(|b| [b.re, b.im]),
            "sampled": preserves_t_orthogonality_sampled(&t, &endo, a.trials, seed, tol)?,
            "classification": classify_preserver(&t, &endo, a.trials, seed, tol)?,
            "seed": seed,
        }),
        EXIT_OK,
    ))
}

fn fit(a: &FitArgs) -> Outcome {
    let space: PNormSpace = load("space", &a.space)?;
    let report = hilbert_fit(&space, a.trials, seed_or_default(a.seed)?)?;
    Ok((to_value(&report), EXIT_OK))
}

fn run_verify(a: &VerifyArgs, stderr: &mut dyn Write) -> Outcome {
    let seed = seed_or_default(a.seed)?;
    let started = Instant::now();
    let report = verify::run_suite(&a.suite, seed, a.trials).ok_or_else(|| {
        InputError(format!("unknown suite {:?}; expected one of {}", a.suite, verify::SUITES.join(", ")))
    })?;
    let _ = writeln!(
        stderr,
        "suite {} seed {} trials {}: {} theorem failures in {:.2?}",
        report.suite,
        seed,
        a.trials,
        report.theorem_failures(),
        started.elapsed()
    );
    let code = if report.passed() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((to_value(&report), code))
}

fn run_fixtures(a: &FixtureArgs, stderr: &mut dyn Write) -> Outcome {
    let report = fixtures::replay(a.name.as_deref()).ok_or_else(|| {
        InputError(format!(
            "unknown fixture {:?}; expected one of {}",
            a.name.as_deref().unwrap_or(""),
            fixtures::FIXTURE_NAMES.join(", ")
        ))
    })?;
    let _ = writeln!(stderr, "{}/{} fixtures reproduced", report.reproduced, report.total);
    let code = if report.all_reproduced() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((to_value(&report), code))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Check(a) => check(a),
        Command::Symmetry(a) => symmetry(a),
        Command::Isometry(a) => isometry(a),
        Command::Preserve(a) => preserve(a),
        Command::HilbertFit(a) => fit(a),
        Command::Verify(a) => run_verify(a, stderr),
        Command::Fixtures(a) => run_fixtures(a, stderr),
    };
    match outcome {
        Ok((value, code)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            let _ = writeln!(stdout, "{text}");
            code
        }
        Err(InputError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}
