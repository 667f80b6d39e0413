//! Randomized property suites, one per group of structural results.
//!
//! Every suite is a pure function of `(seed, trials)`. Each property draws from
//! its own generator (derived from the seed and the property's position), so
//! adding a property never perturbs the instances of another.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::OrthoError;
use crate::fixtures;
use crate::pairing::{functional_kernel, PairingOperator, ThetaDirection};
use crate::preserve::{
    adjoint_conjugate, classify_preserver, hilbert_fit,
    rotation_bj_deviation, two_dim_hilbert_conditions, EndoOperator, PreservationFailure,
    PreserverClass,
};
use crate::sampling::{self, SuiteRng};
use crate::scalar::{Scalar, ScalarField, ONE};
use crate::space::{PNormSpace, Vector};
use crate::symmetry::{
    find_nonisotropic, halfspace_symmetry_check, is_operator_symmetric, is_theta_left_symmetric_at,
    symmetry_at, symmetry_scalar,
};
use crate::DEFAULT_TOL;

pub const SUITES: [&str; 6] = ["basic", "symmetry", "direction", "preserver", "hilbert", "all"];

/// Scaled tolerance for the pairing identities.
pub const BASIC_TOL: f64 = 1e-10;
/// Sampled pairs per preservation test.
pub const PRESERVER_SAMPLES: usize = 500;
/// Sample count for the Hilbert-space fits.
pub const FIT_SAMPLES: usize = 200;
pub const FIT_ACCEPT: f64 = 1e-8;
pub const FIT_REJECT: f64 = 0.01;
pub const ROTATION_WITNESS_GAP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub id: String,
    /// A failure here contradicts a proved statement, as opposed to a
    /// numerical agreement check.
    pub theorem: bool,
    pub trials: usize,
    pub failures: usize,
    pub counterexample: Option<Value>,
    /// Largest deviation observed, in the property's own units (0/1 for yes/no checks).
    pub max_violation: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub observed: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyRecord>,
}

impl SuiteReport {
    pub fn theorem_failures(&self) -> usize {
        self.properties.iter().filter(|p| p.theorem).map(|p| p.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.theorem_failures() == 0
    }

    pub fn property(&self, id: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|p| p.id == id)
    }
}

struct Tally(PropertyRecord);

impl Tally {
    fn new(id: &str, theorem: bool) -> Self {
        Tally(PropertyRecord {
            id: id.to_string(),
            theorem,
            trials: 0,
            failures: 0,
            counterexample: None,
            max_violation: 0.0,
            observed: BTreeMap::new(),
        })
    }

    /// Records a trial whose deviation `violation` fails when above `limit`.
    fn measure(&mut self, violation: f64, limit: f64, witness: impl FnOnce() -> Value) {
        self.flag(!(violation <= limit), violation, witness);
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.flag(!ok, if ok { 0.0 } else { 1.0 }, witness);
    }

    fn flag(&mut self, failed: bool, violation: f64, witness: impl FnOnce() -> Value) {
        let r = &mut self.0;
        r.trials += 1;
        if violation.is_nan() {
            r.max_violation = f64::INFINITY;
        } else {
            r.max_violation = r.max_violation.max(violation);
        }
        if failed {
            r.failures += 1;
            if r.counterexample.is_none() {
                r.counterexample = Some(witness());
            }
        }
    }

    fn observe(&mut self, label: &str, value: f64) {
        self.0.observed.insert(label.to_string(), value);
    }

    fn error(&mut self, e: OrthoError, context: Value) {
        self.flag(true, f64::INFINITY, || json!({ "error": e.to_string(), "input": context }));
    }

    fn done(self) -> PropertyRecord {
        self.0
    }
}

/// Independent generator for property `index` of a suite.
fn property_rng(seed: u64, index: u64) -> SuiteRng {
    sampling::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn shape(k: usize) -> (usize, ScalarField) {
    let n = 2 + k % 3;
    let field = if (k / 3) % 2 == 0 { ScalarField::Real } else { ScalarField::Complex };
    (n, field)
}

fn operator(field: ScalarField, m: crate::linalg::Matrix) -> PairingOperator {
    PairingOperator::from_matrix(field, m).expect("sampled entries are finite")
}

fn random_operator(rng: &mut SuiteRng, field: ScalarField, n: usize) -> PairingOperator {
    operator(field, sampling::matrix(rng, field, n))
}

fn random_theta(rng: &mut SuiteRng, field: ScalarField) -> ThetaDirection {
    ThetaDirection::new(match field {
        ScalarField::Real if rng.random_bool(0.5) => PI,
        ScalarField::Real => 0.0,
        ScalarField::Complex => rng.random_range(0.0..TAU),
    })
}

/// A random vector `y` with `x ⊥_T y`, or `None` when `Tx = 0`.
fn perp_sample(rng: &mut SuiteRng, t: &PairingOperator, x: &Vector, field: ScalarField) -> Option<Vector> {
    let basis = t.t_perp_basis(x).ok()?;
    sampling::combination(rng, field, &basis)
}

/// A random `y` with `y ⊥_T z`, i.e. from the kernel of `(T ., z)`.
fn left_perp_sample(rng: &mut SuiteRng, t: &PairingOperator, z: &Vector, field: ScalarField) -> Option<Vector> {
    let w = t.transpose().apply(z).ok()?;
    let basis = functional_kernel(&w, t.operator_norm() * z.euclidean_norm()).ok()?;
    sampling::combination(rng, field, &basis)
}

fn ctx(t: &PairingOperator, x: &Vector) -> Value {
    json!({ "operator": t, "x": x })
}

fn ctx_xy(t: &PairingOperator, x: &Vector, y: &Vector) -> Value {
    json!({ "operator": t, "x": x, "y": y })
}

/// Runs a named suite; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64, trials: usize) -> Option<SuiteReport> {
    let properties = match name {
        "basic" => basic_properties(seed, trials),
        "symmetry" => symmetry_properties(seed, trials),
        "direction" => direction_properties(seed, trials),
        "preserver" => preserver_properties(seed, trials),
        "hilbert" => hilbert_properties(seed, trials),
        "all" => SUITES[..5]
            .iter()
            .flat_map(|s| run_suite(s, seed, trials).expect("known suite").properties)
            .collect(),
        _ => return None,
    };
    Some(SuiteReport { suite: name.to_string(), seed, trials, properties })
}

/// Identities of the pairing and its directional variant.
pub fn basic_properties(seed: u64, trials: usize) -> Vec<PropertyRecord> {
    vec![
        theta_direction_vanishes(seed, trials),
        directions_unique_mod_pi(seed, trials),
        orthogonal_in_every_direction(seed, trials),
        phase_identity(seed, trials),
        right_additive(seed, trials),
        left_additive(seed, trials),
        bilinear(seed, trials),
    ]
}

fn theta_direction_vanishes(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("basic.theta_direction", true);
    let mut rng = property_rng(seed, 1);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let x = sampling::vector(&mut rng, field, n);
        let y = sampling::vector(&mut rng, field, n);
        let theta = t.theta_direction(&x, &y).expect("conforming").theta;
        let v = t.pair_theta(theta, &x, &y).expect("conforming").abs() / t.scale(&x, &y);
        tally.measure(v, BASIC_TOL, || ctx_xy(&t, &x, &y));
    }
    tally.done()
}

/// A nonzero pairing vanishes in exactly one direction modulo `pi`.
fn directions_unique_mod_pi(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("basic.direction_unique_mod_pi", true);
    let mut rng = property_rng(seed, 2);
    for k in 0..trials {
        let (n, _) = shape(k);
        let field = ScalarField::Complex;
        let t = random_operator(&mut rng, field, n);
        let x = sampling::vector(&mut rng, field, n);
        let y = sampling::vector(&mut rng, field, n);
        let s = t.scale(&x, &y);
        if t.pair(&x, &y).unwrap().norm() <= 1e3 * BASIC_TOL * s {
            continue;
        }
        let theta0 = t.theta_direction(&x, &y).unwrap().theta;
        let offset = rng.random_range(0.1..PI - 0.1) + if rng.random_bool(0.5) { PI } else { 0.0 };
        let phi = ThetaDirection::new(theta0.radians() + offset);
        let a = t.pair_theta(theta0, &x, &y).unwrap().abs() / s;
        let b = t.pair_theta(phi, &x, &y).unwrap().abs() / s;
        tally.check(!(a <= BASIC_TOL && b <= BASIC_TOL), || {
            json!({ "input": ctx_xy(&t, &x, &y), "theta": theta0.radians(), "phi": phi.radians() })
        });
    }
    tally.done()
}

fn orthogonal_in_every_direction(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("basic.orthogonal_all_directions", true);
    let mut rng = property_rng(seed, 3);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let x = sampling::vector(&mut rng, field, n);
        let Some(y) = perp_sample(&mut rng, &t, &x, field) else { continue };
        let theta = ThetaDirection::new(rng.random_range(0.0..TAU));
        let v = t.pair_theta(theta, &x, &y).unwrap().abs() / t.scale(&x, &y);
        tally.measure(v, BASIC_TOL, || json!({ "input": ctx_xy(&t, &x, &y), "theta": theta.radians() }));
    }
    tally.done()
}

fn phase_identity(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("basic.phase_identity", true);
    let mut rng = property_rng(seed, 4);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let x = sampling::vector(&mut rng, field, n);
        let y = sampling::vector(&mut rng, field, n);
        let theta = random_theta(&mut rng, field);
        let phi = random_theta(&mut rng, field).radians();
        let e = Scalar::from_polar(1.0, phi);
        let e = if field.is_real() { Scalar::new(e.re.round(), 0.0) } else { e };
        let a = t.pair_theta(theta, &x, &y.scaled(e)).unwrap();
        let b = t.pair_theta(theta.shifted_back(phi), &x, &y).unwrap();
        let c = t.pair_theta(theta, &x.scaled(e), &y).unwrap();
        let v = (a - b).abs().max((a - c).abs()) / t.scale(&x, &y);
        tally.measure(v, BASIC_TOL, || {
            json!({ "input": ctx_xy(&t, &x, &y), "theta": theta.radians(), "phi": phi })
        });
    }
    tally.done()
}

fn right_additive(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("basic.right_additive", true);
    let mut rng = property_rng(seed, 5);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let x = sampling::vector(&mut rng, field, n);
        let (Some(y), Some(z)) = (perp_sample(&mut rng, &t, &x, field), perp_sample(&mut rng, &t, &x, field))
        else {
            continue;
        };
        let (a, b) = (sampling::scalar(&mut rng, field), sampling::scalar(&mut rng, field));
        let w = y.combine(a, &z, b).unwrap();
        let v = t.pair(&x, &w).unwrap().norm() / t.scale(&x, &w);
        tally.measure(v, BASIC_TOL, || json!({ "input": ctx_xy(&t, &x, &y), "z": z }));
    }
    tally.done()
}

fn left_additive(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("basic.left_additive", true);
    let mut rng = property_rng(seed, 6);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let z = sampling::vector(&mut rng, field, n);
        let (Some(x), Some(y)) =
            (left_perp_sample(&mut rng, &t, &z, field), left_perp_sample(&mut rng, &t, &z, field))
        else {
            continue;
        };
        let (a, b) = (sampling::scalar(&mut rng, field), sampling::scalar(&mut rng, field));
        let w = x.combine(a, &y, b).unwrap();
        let v = t.pair(&w, &z).unwrap().norm() / t.scale(&w, &z);
        tally.measure(v, BASIC_TOL, || json!({ "input": ctx_xy(&t, &x, &y), "z": z }));
    }
    tally.done()
}

fn bilinear(seed: u64, trials: usize) -> PropertyRecord {
    const LIMIT: f64 = 1e-12;
    let mut tally = Tally::new("basic.bilinear", true);
    let mut rng = property_rng(seed, 7);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let [x, u, y] = [0; 3].map(|_| sampling::vector(&mut rng, field, n));
        let (a, b) = (sampling::scalar(&mut rng, field), sampling::scalar(&mut rng, field));
        let xu = x.combine(a, &u, b).unwrap();
        let m = t.operator_norm();
        let scale =
            1.0 + m * (a.norm() * x.euclidean_norm() + b.norm() * u.euclidean_norm()) * y.euclidean_norm();
        let left = t.pair(&xu, &y).unwrap() - a * t.pair(&x, &y).unwrap() - b * t.pair(&u, &y).unwrap();
        let right = t.pair(&y, &xu).unwrap() - a * t.pair(&y, &x).unwrap() - b * t.pair(&y, &u).unwrap();
        let v = left.norm().max(right.norm()) / scale;
        tally.measure(v, LIMIT, || json!({ "input": ctx_xy(&t, &x, &y), "u": u }));
    }
    tally.done()
}

/// Left/right symmetry, the symmetry scalar, and operator symmetry.
pub fn symmetry_properties(seed: u64, trials: usize) -> Vec<PropertyRecord> {
    let (equivalence, lemma) = nonisotropic_equivalence(seed, trials);
    vec![
        equivalence,
        lemma,
        isotropic_equivalence(seed, trials),
        operator_symmetry_biconditional(seed, trials),
        scalar_reproduces_pairing(seed, trials),
        definition_soundness(seed, trials),
        real_sign_rule(seed, trials),
        halfspace_agrees(seed, trials),
    ]
}

fn random_lambda(rng: &mut SuiteRng, field: ScalarField) -> Scalar {
    loop {
        let l = sampling::scalar(rng, field);
        if l.norm() > 0.1 && (l - ONE).norm() > 0.1 {
            return l;
        }
    }
}

fn nonisotropic_equivalence(seed: u64, trials: usize) -> (PropertyRecord, PropertyRecord) {
    const LEMMA_LIMIT: f64 = 1e-8;
    let mut tally = Tally::new("symmetry.nonisotropic_left_iff_right", true);
    let mut lemma = Tally::new("symmetry.nonisotropic_lambda_one", true);
    let mut rng = property_rng(seed, 11);
    for k in 0..trials {
        let (n, field) = shape(k / 3);
        let (t, x) = match k % 3 {
            0 => (random_operator(&mut rng, field, n), sampling::vector(&mut rng, field, n)),
            1 => (
                operator(field, sampling::symmetric_matrix(&mut rng, field, n)),
                sampling::vector(&mut rng, field, n),
            ),
            _ => {
                let (m, x) = sampling::symmetric_point(&mut rng, field, n, ONE);
                (operator(field, m), x)
            }
        };
        if t.is_isotropic(&x, DEFAULT_TOL).unwrap().verdict {
            continue;
        }
        let s = symmetry_at(&t, &x, DEFAULT_TOL).unwrap();
        tally.check(s.left == s.right, || json!({ "input": ctx(&t, &x), "verdict": s }));
        if s.left {
            let u = t.apply(&x).unwrap();
            let v = t.transpose().apply(&x).unwrap();
            let dev = if u.is_zero() { v.euclidean_norm() } else { (&u - &v).euclidean_norm() / u.euclidean_norm() };
            lemma.measure(dev, LEMMA_LIMIT, || ctx(&t, &x));
        }
    }
    (tally.done(), lemma.done())
}

fn isotropic_equivalence(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("symmetry.isotropic_left_iff_right", true);
    let mut rng = property_rng(seed, 12);
    let mut k = 0usize;
    while tally.0.trials < trials && k < 20 * trials.max(1) {
        k += 1;
        let (n, field) = shape(k / 3);
        let (t, x) = match k % 3 {
            0 => {
                let t = random_operator(&mut rng, field, n);
                let Some(x) = sampling::isotropic_vector(&mut rng, field, t.matrix()) else { continue };
                (t, x)
            }
            1 => {
                let lambda = random_lambda(&mut rng, field);
                let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
                (operator(field, m), x)
            }
            _ => {
                let n = 2 * (1 + n % 2);
                (
                    operator(field, sampling::antisymmetric_matrix(&mut rng, field, n)),
                    sampling::vector(&mut rng, field, n),
                )
            }
        };
        if !t.is_bijective() || !t.is_isotropic(&x, DEFAULT_TOL).unwrap().verdict {
            continue;
        }
        let s = symmetry_at(&t, &x, DEFAULT_TOL).unwrap();
        tally.check(s.left == s.right, || json!({ "input": ctx(&t, &x), "verdict": s }));
    }
    tally.done()
}

fn operator_symmetry_biconditional(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("symmetry.operator_symmetric_iff_witness", true);
    let mut rng = property_rng(seed, 13);
    for k in 0..trials {
        let (n, field) = shape(k / 4);
        let m = match k % 4 {
            0 => sampling::symmetric_matrix(&mut rng, field, n),
            1 => sampling::matrix(&mut rng, field, n),
            2 => sampling::antisymmetric_matrix(&mut rng, field, n),
            _ => sampling::symmetric_point(&mut rng, field, n, ONE).0,
        };
        let t = operator(field, m);
        let lhs = is_operator_symmetric(&t, DEFAULT_TOL);
        let witness = find_nonisotropic(&t);
        let rhs = match &witness {
            Some(w) => symmetry_at(&t, w, DEFAULT_TOL).unwrap().left,
            None => false,
        };
        tally.check(lhs == rhs, || json!({ "operator": t, "symmetric": lhs, "witness": witness }));
    }
    tally.done()
}

fn scalar_reproduces_pairing(seed: u64, trials: usize) -> PropertyRecord {
    const LIMIT: f64 = 1e-10;
    let mut tally = Tally::new("symmetry.scalar_reproduces_pairing", true);
    let mut rng = property_rng(seed, 14);
    for k in 0..trials {
        let (n, field) = shape(k);
        let lambda = if k % 2 == 0 { ONE } else { random_lambda(&mut rng, field) };
        let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
        let t = operator(field, m);
        let found = match symmetry_scalar(&t, &x) {
            Ok(l) => l,
            Err(e) => {
                tally.error(e, ctx(&t, &x));
                continue;
            }
        };
        let mut worst = (found - lambda).norm() / lambda.norm();
        for _ in 0..100 {
            let y = sampling::vector(&mut rng, field, n);
            let d = t.pair(&x, &y).unwrap() - found * t.pair(&y, &x).unwrap();
            worst = worst.max(d.norm() / t.scale(&x, &y));
        }
        tally.measure(worst, LIMIT, || json!({ "input": ctx(&t, &x), "lambda": [found.re, found.im] }));
    }
    tally.done()
}

/// Sampling check of the algebraic symmetry decision against the definitions.
fn definition_soundness(seed: u64, trials: usize) -> PropertyRecord {
    const EXACT: f64 = 1e-8;
    let mut tally = Tally::new("symmetry.definition_soundness", true);
    let mut rng = property_rng(seed, 15);
    for k in 0..trials {
        let (n, field) = shape(k / 2);
        let (t, x) = if k % 2 == 0 {
            (random_operator(&mut rng, field, n), sampling::vector(&mut rng, field, n))
        } else {
            let lambda = random_lambda(&mut rng, field);
            let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
            (operator(field, m), x)
        };
        let s = symmetry_at(&t, &x, DEFAULT_TOL).unwrap();
        let mut worst = 0.0_f64;
        let mut ok = true;
        // left: x ⊥ y forces y ⊥ x; right: y ⊥ x forces x ⊥ y
        for (flag, forward) in [(s.left, true), (s.right, false)] {
            let draw = |rng: &mut SuiteRng| {
                if forward {
                    perp_sample(rng, &t, &x, field)
                } else {
                    left_perp_sample(rng, &t, &x, field)
                }
            };
            let reversed = |y: &Vector| {
                let v = if forward { t.pair(y, &x) } else { t.pair(&x, y) };
                v.unwrap().norm() / t.scale(&x, y)
            };
            if flag {
                for _ in 0..200 {
                    let Some(y) = draw(&mut rng) else { break };
                    worst = worst.max(reversed(&y));
                }
                ok &= worst <= EXACT;
            } else {
                // a concrete witness must exist among the kernel basis
                let basis = if forward {
                    t.t_perp_basis(&x).unwrap_or_default()
                } else {
                    let w = t.transpose().apply(&x).unwrap();
                    functional_kernel(&w, t.operator_norm() * x.euclidean_norm()).unwrap_or_default()
                };
                ok &= basis.iter().any(|b| reversed(b) > DEFAULT_TOL);
            }
        }
        tally.flag(!ok, worst, || json!({ "input": ctx(&t, &x), "verdict": s }));
    }
    tally.done()
}

/// Over the reals a left-symmetric point either keeps or flips every sign,
/// according to the sign of `lambda`.
fn real_sign_rule(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("symmetry.real_sign_rule", true);
    let mut rng = property_rng(seed, 16);
    let field = ScalarField::Real;
    for k in 0..trials {
        let n = 2 + k % 3;
        let lambda = if k % 3 == 0 { ONE } else { random_lambda(&mut rng, field) };
        let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
        let t = operator(field, m);
        let keeps = lambda.re > 0.0;
        let mut ok = true;
        for _ in 0..50 {
            let y = sampling::vector(&mut rng, field, n);
            let thr = DEFAULT_TOL * t.scale(&x, &y);
            let (a, b) = (t.pair(&x, &y).unwrap().re, t.pair(&y, &x).unwrap().re);
            if a.abs() <= thr {
                continue;
            }
            ok &= (a.signum() == b.signum()) == keeps && b.abs() > 0.0;
        }
        tally.check(ok, || json!({ "input": ctx(&t, &x), "lambda": lambda.re }));
    }
    tally.done()
}

fn halfspace_agrees(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("symmetry.halfspace_form", true);
    let mut rng = property_rng(seed, 17);
    for k in 0..trials {
        let (n, field) = shape(k / 2);
        let (t, x) = if k % 2 == 0 {
            (random_operator(&mut rng, field, n), sampling::vector(&mut rng, field, n))
        } else {
            let lambda = random_lambda(&mut rng, field);
            let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
            (operator(field, m), x)
        };
        let left = symmetry_at(&t, &x, DEFAULT_TOL).unwrap().left;
        let report = halfspace_symmetry_check(&t, &x, 60, rng.random(), DEFAULT_TOL).unwrap();
        tally.check(report.holds == left, || json!({ "input": ctx(&t, &x), "left": left, "report": report }));
    }
    tally.done()
}

/// The directional symmetry results.
pub fn direction_properties(seed: u64, trials: usize) -> Vec<PropertyRecord> {
    vec![theta_implies_plain(seed, trials), real_lambda_converse(seed, trials), converse_fails_at_fixture()]
}

fn theta_implies_plain(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("direction.theta_left_implies_left", true);
    let mut rng = property_rng(seed, 21);
    let mut antecedent = 0usize;
    for k in 0..trials {
        let (n, field) = shape(k / 4);
        let (t, x) = match k % 4 {
            0 => (random_operator(&mut rng, field, n), sampling::vector(&mut rng, field, n)),
            1 => {
                let t = random_operator(&mut rng, field, n);
                match sampling::isotropic_vector(&mut rng, field, t.matrix()) {
                    Some(x) => (t, x),
                    None => (t, sampling::vector(&mut rng, field, n)),
                }
            }
            2 => {
                let lambda = random_lambda(&mut rng, field);
                let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
                (operator(field, m), x)
            }
            _ => {
                let lambda = Scalar::new(sampling::gaussian(&mut rng), 0.0);
                let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
                (operator(field, m), x)
            }
        };
        let theta = random_theta(&mut rng, field);
        let theta_left = is_theta_left_symmetric_at(&t, theta, &x, DEFAULT_TOL).unwrap();
        let left = symmetry_at(&t, &x, DEFAULT_TOL).unwrap().left;
        antecedent += theta_left as usize;
        tally.check(!theta_left || left, || json!({ "input": ctx(&t, &x), "theta": theta.radians() }));
    }
    tally.observe("antecedent_held", antecedent as f64);
    tally.done()
}

/// With a real symmetry scalar the implication reverses in every direction.
fn real_lambda_converse(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("direction.real_lambda_converse", true);
    let mut rng = property_rng(seed, 22);
    for k in 0..trials {
        let (n, field) = shape(k);
        let lambda = if k % 2 == 0 { ONE } else { Scalar::new(random_lambda(&mut rng, ScalarField::Real).re, 0.0) };
        let (m, x) = sampling::symmetric_point(&mut rng, field, n, lambda);
        let t = operator(field, m);
        let theta = random_theta(&mut rng, field);
        let ok = is_theta_left_symmetric_at(&t, theta, &x, DEFAULT_TOL).unwrap();
        tally.check(ok, || json!({ "input": ctx(&t, &x), "theta": theta.radians(), "lambda": lambda.re }));
    }
    tally.done()
}

/// The rotated `C^2` operator at `(1,0)`: left symmetric, not `pi/2`-left symmetric.
fn converse_fails_at_fixture() -> PropertyRecord {
    let mut tally = Tally::new("direction.converse_counterexample", true);
    let t = fixtures::rotated_c2_operator();
    let e1 = Vector::complex(&[(1.0, 0.0), (0.0, 0.0)]);
    let w = Vector::complex(&[(1.0, 0.0), (0.0, 1.0)]);
    let half_pi = ThetaDirection::new(FRAC_PI_2);
    let left = symmetry_at(&t, &e1, DEFAULT_TOL).unwrap().left;
    let theta_left = is_theta_left_symmetric_at(&t, half_pi, &e1, DEFAULT_TOL).unwrap();
    let fwd = t.pair_theta(half_pi, &e1, &w).unwrap();
    let back = t.pair_theta(half_pi, &w, &e1).unwrap();
    let witnessed = fwd.abs() <= BASIC_TOL && back.abs() > DEFAULT_TOL;
    tally.check(left && !theta_left && witnessed, || json!({ "input": ctx(&t, &e1), "y": w }));
    tally.done()
}

/// The preserver characterization.
pub fn preserver_properties(seed: u64, trials: usize) -> Vec<PropertyRecord> {
    vec![isometry_multiples_preserve(seed, trials), generic_maps_fail(seed, trials), functoriality(seed, trials)]
}

fn isometry_multiples_preserve(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("preserver.isometry_multiples", true);
    let mut rng = property_rng(seed, 31);
    for k in 0..trials {
        let (n, field) = shape(k);
        let (t, a) = if k % 4 == 3 {
            // any invertible T and A = identity
            let t = random_operator(&mut rng, field, n);
            (t, EndoOperator::new(ScalarField::Real, crate::linalg::Matrix::identity(n, n)).unwrap())
        } else {
            let spd = sampling::spd_matrix(&mut rng, n);
            let a = EndoOperator::from_real(&sampling::t_isometry_for_spd(&mut rng, &spd)).unwrap();
            (operator(ScalarField::Real, sampling::complexify(&spd)), a)
        };
        let c = sampling::scalar(&mut rng, field);
        let a = a.scaled(c);
        let expected = ONE / (c * c);
        let class = classify_preserver(&t, &a, PRESERVER_SAMPLES, rng.random(), DEFAULT_TOL).unwrap();
        let dev = match &class {
            PreserverClass::IsometryMultiple { beta } => (beta - expected).norm() / expected.norm(),
            _ => f64::INFINITY,
        };
        tally.measure(dev, 1e-6, || json!({ "operator": t, "endo": a, "class": class }));
    }
    tally.done()
}

fn generic_maps_fail(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("preserver.non_preserving_detected", true);
    let mut rng = property_rng(seed, 32);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let a = EndoOperator::new(field, sampling::matrix(&mut rng, field, n)).unwrap();
        let class = classify_preserver(&t, &a, PRESERVER_SAMPLES, rng.random(), DEFAULT_TOL).unwrap();
        let genuine = match &class {
            PreserverClass::NotPreserving { counterexample: c } => {
                let (x, y) = (&c.x, &c.y);
                let (ax, ay) = (a.apply(x).unwrap(), a.apply(y).unwrap());
                let before = t.pair(x, y).unwrap().norm() / t.scale(x, y);
                let after = t.pair(&ax, &ay).unwrap().norm() / t.scale(&ax, &ay);
                match c.failure {
                    PreservationFailure::Forward => before <= DEFAULT_TOL && after > DEFAULT_TOL,
                    PreservationFailure::Backward => after <= DEFAULT_TOL && before > DEFAULT_TOL,
                }
            }
            _ => false,
        };
        tally.check(genuine, || json!({ "operator": t, "endo": a, "class": class }));
    }
    tally.done()
}

fn functoriality(seed: u64, trials: usize) -> PropertyRecord {
    const LIMIT: f64 = 1e-12;
    let mut tally = Tally::new("preserver.adjoint_functorial", true);
    let mut rng = property_rng(seed, 33);
    for k in 0..trials {
        let (n, field) = shape(k);
        let t = random_operator(&mut rng, field, n);
        let a = EndoOperator::new(field, sampling::matrix(&mut rng, field, n)).unwrap();
        let b = EndoOperator::new(field, sampling::matrix(&mut rng, field, n)).unwrap();
        let once = adjoint_conjugate(&t, &a.compose(&b).unwrap()).unwrap();
        let twice = adjoint_conjugate(&adjoint_conjugate(&t, &a).unwrap(), &b).unwrap();
        let scale = t.matrix().norm() * (a.matrix().norm() * b.matrix().norm()).powi(2);
        let v = (once.matrix() - twice.matrix()).norm() / scale;
        tally.measure(v, LIMIT, || json!({ "operator": t, "a": a, "b": b }));
    }
    tally.done()
}

/// Numerical evidence for the Hilbert-space characterizations, plus the
/// agreement of the two Birkhoff-James deciders.
pub fn hilbert_properties(seed: u64, trials: usize) -> Vec<PropertyRecord> {
    vec![
        fit_residuals(seed),
        rotation_lemma(seed, trials),
        two_dim_conditions(seed, trials),
        bj_deciders_agree(seed, trials),
    ]
}

fn fit_label(space: &PNormSpace) -> String {
    format!("{}_l{}^{}", space.field(), space.p(), space.n())
}

fn fit_residuals(seed: u64) -> PropertyRecord {
    let mut tally = Tally::new("hilbert.fit_residuals", true);
    let cases = [
        (PNormSpace::real(2, 2.0), true),
        (PNormSpace::real(3, 2.0), true),
        (PNormSpace::real(2, 1.5), false),
        (PNormSpace::real(2, 3.0), false),
        (PNormSpace::complex(2, 2.0), false),
    ];
    for (space, euclidean) in cases {
        let space = space.expect("valid exponent");
        let label = fit_label(&space);
        match hilbert_fit(&space, FIT_SAMPLES, seed) {
            Ok(r) => {
                tally.observe(&label, r.residual);
                let ok = if euclidean { r.residual <= FIT_ACCEPT } else { r.residual >= FIT_REJECT };
                tally.check(ok, || json!({ "space": space, "fit": r }));
            }
            Err(e) => tally.error(e, json!({ "space": space })),
        }
    }
    tally.done()
}

fn rotation_lemma(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("hilbert.rotation_lemma", true);
    let flat = rotation_bj_deviation(2.0, trials.max(1), seed).unwrap();
    tally.observe("p2_max_gap", flat.max_gap);
    tally.measure(flat.max_gap, 1e-10, || json!({ "p": 2.0, "deviation": flat }));
    for p in [1.5, 3.0] {
        let r = rotation_bj_deviation(p, 200, seed).unwrap();
        tally.observe(&format!("p{p}_max_gap"), r.max_gap);
        let ok = r.max_gap > ROTATION_WITNESS_GAP && r.witness.is_some();
        tally.check(ok, || json!({ "p": p, "deviation": r }));
    }
    tally.done()
}

fn two_dim_conditions(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("hilbert.two_dim_conditions", true);
    let t = PairingOperator::identity(ScalarField::Real, 2);
    let e1 = Vector::real(&[1.0, 0.0]);
    let e2 = Vector::real(&[0.0, 1.0]);
    let samples = trials.max(1);
    let l2 = PNormSpace::real(2, 2.0).unwrap();
    let r = two_dim_hilbert_conditions(&l2, &t, &e1, &e2, samples, seed, 1e-10).unwrap();
    tally.check(r.all_hold, || json!({ "p": 2.0, "report": r }));
    let l4 = PNormSpace::real(2, 4.0).unwrap();
    let r = two_dim_hilbert_conditions(&l4, &t, &e1, &e2, samples, seed, DEFAULT_TOL).unwrap();
    tally.observe("p4_norm_identity", r.norm_identity);
    tally.check(!r.all_hold && r.norm_identity > DEFAULT_TOL, || json!({ "p": 4.0, "report": r }));
    tally.done()
}

/// Minimization and support-functional deciders give the same verdict.
///
/// Even-indexed pairs are exactly orthogonal (`y` from the kernel of the
/// support functional), odd-indexed pairs are independent Gaussians.
pub fn bj_deciders_agree(seed: u64, trials: usize) -> PropertyRecord {
    let mut tally = Tally::new("hilbert.bj_deciders_agree", false);
    let mut rng = property_rng(seed, 41);
    let shapes = [(1.2, 2), (1.2, 5), (2.0, 2), (2.0, 5), (4.0, 2), (4.0, 5)];
    let mut orthogonal = 0usize;
    for k in 0..trials {
        let (p, n) = shapes[k % shapes.len()];
        let field = if (k / shapes.len()) % 2 == 0 { ScalarField::Real } else { ScalarField::Complex };
        let space = PNormSpace::new(n, p, field).unwrap();
        let x = sampling::vector(&mut rng, field, n);
        let y = if k % 2 == 0 {
            let f = space.support_functional(&x).unwrap();
            let basis = functional_kernel(&f, 1.0).unwrap();
            sampling::combination(&mut rng, field, &basis).expect("n >= 2")
        } else {
            sampling::vector(&mut rng, field, n)
        };
        let by_min = space.is_bj_orthogonal(&x, &y, DEFAULT_TOL).unwrap();
        let by_dual = space.is_bj_orthogonal_smooth(&x, &y, DEFAULT_TOL).unwrap();
        orthogonal += by_dual.verdict as usize;
        let disagree = by_min.verdict != by_dual.verdict;
        tally.flag(disagree, disagree as u8 as f64, || {
            json!({
                "space": space, "x": x, "y": y,
                "minimization_gap": by_min.gap, "functional_gap": by_dual.gap,
            })
        });
    }
    tally.observe("orthogonal_pairs", orthogonal as f64);
    tally.done()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_clean(props: &[PropertyRecord]) {
        for p in props {
            assert_eq!(p.failures, 0, "{}: {:?}", p.id, p.counterexample);
            assert!(p.trials > 0, "{} ran no trials", p.id);
            assert_eq!(p.counterexample.is_some(), p.failures > 0);
        }
    }

    #[test]
    fn basic_suite_small() {
        assert_clean(&basic_properties(3, 60));
    }

    #[test]
    fn symmetry_suite_small() {
        assert_clean(&symmetry_properties(3, 60));
    }

    #[test]
    fn direction_suite_small() {
        let props = direction_properties(3, 60);
        assert_clean(&props);
        assert!(props[0].observed["antecedent_held"] > 0.0);
    }

    #[test]
    fn preserver_suite_small() {
        assert_clean(&preserver_properties(3, 12));
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 1, 1).is_none());
    }

    #[test]
    fn tally_records_first_counterexample() {
        let mut t = Tally::new("x", true);
        t.measure(0.5, 1.0, || json!(0));
        t.measure(2.0, 1.0, || json!(1));
        t.measure(3.0, 1.0, || json!(2));
        let r = t.done();
        assert_eq!((r.trials, r.failures, r.max_violation), (3, 2, 3.0));
        assert_eq!(r.counterexample, Some(json!(1)));
    }

    #[test]
    fn deterministic() {
        assert_eq!(run_suite("basic", 9, 20), run_suite("basic", 9, 20));
        assert_ne!(run_suite("basic", 9, 20), run_suite("basic", 10, 20));
    }
}
