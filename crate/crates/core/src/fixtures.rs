//! Hand-worked operators on `C^2` and `R^2` with their stated properties, and
//! a replay that re-derives every stated property from the library.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::pairing::{PairingOperator, ThetaDirection};
use crate::scalar::{Scalar, ScalarField, I, ONE, ZERO};
use crate::space::Vector;
use crate::symmetry::{is_theta_left_symmetric_at, symmetry_at};
use crate::DEFAULT_TOL;

/// Exactness demanded of the replayed values.
pub const REPLAY_TOL: f64 = 1e-12;

fn re(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

fn im(x: f64) -> Scalar {
    Scalar::new(0.0, x)
}

/// `T(1,0) = 7i e1* + e2*`, `T(0,1) = 2 e1* + 3i e2*` on `C^2`.
pub fn basic_c2_operator() -> PairingOperator {
    PairingOperator::from_columns(ScalarField::Complex, vec![vec![im(7.0), ONE], vec![re(2.0), im(3.0)]])
        .expect("valid fixture")
}

/// `T(1,0) = i e2*`, `T(0,1) = e1* + 3i e2*` on `C^2`.
pub fn rotated_c2_operator() -> PairingOperator {
    PairingOperator::from_columns(ScalarField::Complex, vec![vec![ZERO, I], vec![ONE, im(3.0)]])
        .expect("valid fixture")
}

/// `T(1,0) = (1,-1)*`, `T(0,1) = (2,-2)*` on real `l_2^2`; rank one.
pub fn nonbijective_l2_operator() -> PairingOperator {
    PairingOperator::from_columns(ScalarField::Real, vec![vec![ONE, re(-1.0)], vec![re(2.0), re(-2.0)]])
        .expect("valid fixture")
}

/// `T(1,0) = (0,1)*`, `T(0,1) = (1/sqrt2, 1/sqrt2)*` on real `l_2^2`.
pub fn lemma_counterexample_operator() -> PairingOperator {
    let s = re(FRAC_1_SQRT_2);
    PairingOperator::from_columns(ScalarField::Real, vec![vec![ZERO, ONE], vec![s, s]])
        .expect("valid fixture")
}

/// The real antisymmetric form with columns `(0,1)` and `(-1,0)`.
pub fn rotation_generator() -> PairingOperator {
    PairingOperator::real_rows(2, &[0.0, -1.0, 1.0, 0.0]).expect("valid fixture")
}

pub const FIXTURE_NAMES: [&str; 4] =
    ["prop-basic-c2", "direction-example", "nonbijective-l2", "lemma-counterexample"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub reproduced: bool,
    pub checks: Vec<ClaimCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub reproduced: usize,
    pub total: usize,
    pub fixtures: Vec<FixtureOutcome>,
}

impl FixtureReport {
    pub fn all_reproduced(&self) -> bool {
        self.reproduced == self.total
    }
}

struct Claims(Vec<ClaimCheck>);

impl Claims {
    fn check(&mut self, claim: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(ClaimCheck { claim: claim.to_string(), passed, detail: detail.into() });
    }

    fn finish(self, name: &str) -> FixtureOutcome {
        FixtureOutcome {
            name: name.to_string(),
            reproduced: self.0.iter().all(|c| c.passed),
            checks: self.0,
        }
    }
}

fn c(pairs: &[(f64, f64)]) -> Vector {
    Vector::complex(pairs)
}

fn prop_basic_c2() -> FixtureOutcome {
    let t = basic_c2_operator();
    let x = c(&[(0.0, 0.0), (1.0, 0.0)]);
    let y = c(&[(0.5, 0.0), (-1.0 / 3.0, 0.0)]);
    let mut k = Claims(Vec::new());
    let v = t.pair(&x, &y).expect("2-dim");
    k.check(
        "(T(0,1), (1/2,-1/3)) = 1 - i",
        (v - Scalar::new(1.0, -1.0)).norm() <= REPLAY_TOL,
        format!("value {v}"),
    );
    k.check("(0,1) not T-orthogonal to (1/2,-1/3)", !t.is_t_orthogonal(&x, &y, DEFAULT_TOL).unwrap().verdict, "");
    let d = t.pair_theta(ThetaDirection::new(FRAC_PI_4), &x, &y).expect("2-dim");
    k.check(
        "(0,1) T_{pi/4}-orthogonal to (1/2,-1/3)",
        d.abs() <= REPLAY_TOL,
        format!("directional value {d:e}"),
    );
    k.finish("prop-basic-c2")
}

fn direction_example() -> FixtureOutcome {
    let t = rotated_c2_operator();
    let e1 = c(&[(1.0, 0.0), (0.0, 0.0)]);
    let w = c(&[(1.0, 0.0), (0.0, 1.0)]);
    let half_pi = ThetaDirection::new(FRAC_PI_2);
    let mut k = Claims(Vec::new());
    let q = t.pair(&e1, &e1).unwrap();
    k.check("(1,0) is isotropic", q.norm() <= REPLAY_TOL, format!("(Tx,x) = {q}"));
    let s = symmetry_at(&t, &e1, DEFAULT_TOL).unwrap();
    k.check("⊥_T left symmetric at (1,0)", s.left, s.certificate.clone());
    k.check("⊥_T right symmetric at (1,0)", s.right, s.certificate);
    let fwd = t.pair_theta(half_pi, &e1, &w).unwrap();
    let back = t.pair_theta(half_pi, &w, &e1).unwrap();
    k.check("(1,0) ⊥_{T_{pi/2}} (1,i)", fwd.abs() <= REPLAY_TOL, format!("{fwd:e}"));
    k.check("(1,i) not ⊥_{T_{pi/2}} (1,0)", (back - 1.0).abs() <= REPLAY_TOL, format!("{back}"));
    let theta_left = is_theta_left_symmetric_at(&t, half_pi, &e1, DEFAULT_TOL).unwrap();
    k.check("⊥_{T_{pi/2}} not left symmetric at (1,0)", !theta_left, "");
    k.finish("direction-example")
}

fn nonbijective_l2() -> FixtureOutcome {
    let t = nonbijective_l2_operator();
    let d = Vector::real(&[1.0, 1.0]);
    let e1 = Vector::real(&[1.0, 0.0]);
    let mut k = Claims(Vec::new());
    k.check("T is not bijective", !t.is_bijective(), "");
    let q = t.pair(&d, &d).unwrap();
    k.check("(1,1) is isotropic", q.norm() <= REPLAY_TOL, format!("(Tx,x) = {q}"));
    let s = symmetry_at(&t, &d, DEFAULT_TOL).unwrap();
    k.check("⊥_T left symmetric at (1,1)", s.left, s.certificate.clone());
    let fwd = t.pair(&e1, &d).unwrap();
    let back = t.pair(&d, &e1).unwrap();
    k.check("(1,0) ⊥_T (1,1)", fwd.norm() <= REPLAY_TOL, format!("{fwd}"));
    k.check("(1,1) not ⊥_T (1,0)", (back - re(3.0)).norm() <= REPLAY_TOL, format!("{back}"));
    k.check("⊥_T not right symmetric at (1,1)", !s.right, s.certificate);
    k.finish("nonbijective-l2")
}

fn lemma_counterexample() -> FixtureOutcome {
    let t = lemma_counterexample_operator();
    let e1 = Vector::real(&[1.0, 0.0]);
    let mut k = Claims(Vec::new());
    let q = t.pair(&e1, &e1).unwrap();
    k.check("(1,0) is isotropic", q.norm() <= REPLAY_TOL, format!("(Tx,x) = {q}"));
    let s = symmetry_at(&t, &e1, DEFAULT_TOL).unwrap();
    k.check("⊥_T left and right symmetric at (1,0)", s.left && s.right, s.certificate);

    let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut worst_forward = 0.0_f64;
    let mut worst_reverse = 0.0_f64;
    let mut unequal_whenever_beta_nonzero = true;
    for &a in &grid {
        for &b in &grid {
            let v = Vector::real(&[a, b]);
            let into_e1 = t.pair(&v, &e1).unwrap();
            let from_e1 = t.pair(&e1, &v).unwrap();
            worst_forward = worst_forward.max((into_e1 - re(b * FRAC_1_SQRT_2)).norm());
            worst_reverse = worst_reverse.max((from_e1 - re(b)).norm());
            if b != 0.0 && (into_e1 - from_e1).norm() <= REPLAY_TOL {
                unequal_whenever_beta_nonzero = false;
            }
        }
    }
    k.check(
        "(T(a,b), (1,0)) = b/sqrt2 on the 5x5 grid",
        worst_forward <= REPLAY_TOL,
        format!("max error {worst_forward:e}"),
    );
    k.check(
        "(T(1,0), (a,b)) = b on the 5x5 grid",
        worst_reverse <= REPLAY_TOL,
        format!("max error {worst_reverse:e}"),
    );
    k.check("the two differ whenever b != 0", unequal_whenever_beta_nonzero, "");
    k.finish("lemma-counterexample")
}

/// Replays one fixture by name, or all four when `name` is `None`.
pub fn replay(name: Option<&str>) -> Option<FixtureReport> {
    let run = |n: &str| -> Option<FixtureOutcome> {
        Some(match n {
            "prop-basic-c2" => prop_basic_c2(),
            "direction-example" => direction_example(),
            "nonbijective-l2" => nonbijective_l2(),
            "lemma-counterexample" => lemma_counterexample(),
            _ => return None,
        })
    };
    let fixtures = match name {
        Some(n) => vec![run(n)?],
        None => FIXTURE_NAMES.iter().map(|n| run(n).expect("known name")).collect(),
    };
    Some(FixtureReport {
        reproduced: fixtures.iter().filter(|f| f.reproduced).count(),
        total: fixtures.len(),
        fixtures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_reproduce() {
        let r = replay(None).unwrap();
        for f in &r.fixtures {
            for c in &f.checks {
                assert!(c.passed, "{}: {} ({})", f.name, c.claim, c.detail);
            }
        }
        assert_eq!((r.reproduced, r.total), (4, 4));
    }

    #[test]
    fn single_and_unknown() {
        assert_eq!(replay(Some("lemma-counterexample")).unwrap().total, 1);
        assert!(replay(Some("nope")).is_none());
    }
}
