//! Left and right symmetry points of `⊥_T`.
//!
//! `⊥_T` is left symmetric at `x` when `x ⊥_T y` forces `y ⊥_T x`. Writing
//! `u = Mx` (the functional `y -> (Tx, y)`) and `v = M^T x` (the functional
//! `y -> (Ty, x)`), the definition says `ker u ⊆ ker v`, which in finite
//! dimension is exactly `v ∈ span{u}`. Right symmetry is the mirror statement
//! `u ∈ span{v}`. Both are decided by a projection residual; sampling is only
//! used for independent checks.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{OrthoError, Result};
use crate::linalg::project;
use crate::pairing::{functional_kernel, PairingOperator, SignClass, ThetaDirection};
use crate::sampling;
use crate::scalar::{self, Scalar, ScalarField, ZERO};
use crate::space::{DualVector, Vector};
use crate::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryVerdict {
    pub left: bool,
    pub right: bool,
    /// `lambda` with `(Tx, y) = lambda (Ty, x)` for every `y`, when one exists.
    #[serde(rename = "lambda", with = "scalar::opt_pair_repr")]
    pub scalar: Option<Scalar>,
    pub certificate: String,
}

/// `y -> (Ty, x)` as a functional; its coefficients are `M^T x`.
pub fn reversed_functional(t: &PairingOperator, x: &Vector) -> Result<DualVector> {
    t.transpose().apply(x)
}

struct Functionals {
    u: DVector<Scalar>,
    v: DVector<Scalar>,
    /// length below which a functional counts as zero
    zero_level: f64,
}

impl Functionals {
    fn new(t: &PairingOperator, x: &Vector, tol: f64) -> Result<Self> {
        let u = t.apply(x)?.entries().clone();
        let v = reversed_functional(t, x)?.entries().clone();
        Ok(Self { u, v, zero_level: tol * t.operator_norm() * x.euclidean_norm() })
    }

    fn is_zero(&self, w: &DVector<Scalar>) -> bool {
        w.norm() <= self.zero_level
    }
}

/// Span membership `target ∈ span{base}` with the zero conventions of the
/// symmetry rules. Ties at the threshold count as "not contained".
fn contained(
    target: &DVector<Scalar>,
    base: &DVector<Scalar>,
    zero_level: f64,
    tol: f64,
) -> (bool, f64) {
    let base_zero = base.norm() <= zero_level;
    let target_zero = target.norm() <= zero_level;
    if target_zero {
        return (true, 0.0);
    }
    if base_zero {
        return (false, 1.0);
    }
    let (_, residual) = project(target, base);
    let rel = residual / target.norm();
    (rel < tol, rel)
}

/// Left and right symmetry of `⊥_T` at `x`, with the symmetry scalar when defined.
pub fn symmetry_at(t: &PairingOperator, x: &Vector, tol: f64) -> Result<SymmetryVerdict> {
    let f = Functionals::new(t, x, tol)?;
    let (left, left_res) = contained(&f.v, &f.u, f.zero_level, tol);
    let (right, right_res) = contained(&f.u, &f.v, f.zero_level, tol);
    let u_zero = f.is_zero(&f.u);
    let v_zero = f.is_zero(&f.v);

    let scalar = if left && !u_zero && !v_zero { Some(project(&f.u, &f.v).0) } else { None };

    let certificate = match (u_zero, v_zero) {
        (true, true) => "Tx = 0 and M^T x = 0: both functionals vanish".to_string(),
        (true, false) => "Tx = 0 but M^T x != 0: x is T-orthogonal to everything, not conversely"
            .to_string(),
        (false, true) => "M^T x = 0 but Tx != 0: (Ty, x) vanishes identically".to_string(),
        (false, false) => match scalar {
            Some(l) => format!(
                "Tx = lambda M^T x with lambda = {:.12}{:+.12}i (relative residual {:.3e})",
                l.re, l.im, left_res
            ),
            None => format!(
                "Tx and M^T x not collinear (relative residuals {left_res:.3e} / {right_res:.3e})"
            ),
        },
    };
    Ok(SymmetryVerdict { left, right, scalar, certificate })
}

pub fn is_left_symmetric_at(t: &PairingOperator, x: &Vector, tol: f64) -> Result<bool> {
    Ok(symmetry_at(t, x, tol)?.left)
}

pub fn is_right_symmetric_at(t: &PairingOperator, x: &Vector, tol: f64) -> Result<bool> {
    Ok(symmetry_at(t, x, tol)?.right)
}

/// The scalar `lambda` with `(Tx, y) = lambda (Ty, x)` for all `y`.
///
/// Fails when `Tx = 0`, when `⊥_T` is not left symmetric at `x`, or when
/// `(Ty, x)` vanishes identically while `Tx` does not (no scalar can link the two).
pub fn symmetry_scalar(t: &PairingOperator, x: &Vector) -> Result<Scalar> {
    const CHECK: f64 = 1e-10;
    let f = Functionals::new(t, x, f64::EPSILON)?;
    if f.is_zero(&f.u) {
        return Err(OrthoError::FullSpacePerp);
    }
    if f.is_zero(&f.v) {
        return Err(OrthoError::UndeterminedScalar);
    }
    let (lambda, residual) = project(&f.u, &f.v);
    if residual >= CHECK * f.u.norm() {
        return Err(OrthoError::NotLeftSymmetric);
    }
    // (Tx, e_j) = u_j and (T e_j, x) = v_j
    let scale = f.u.norm();
    for (uj, vj) in f.u.iter().zip(f.v.iter()) {
        if (uj - lambda * vj).norm() > CHECK * scale {
            return Err(OrthoError::NotLeftSymmetric);
        }
    }
    Ok(lambda)
}

fn check_theta_field(t: &PairingOperator, x: &Vector, theta: ThetaDirection) -> Result<bool> {
    let real = t.field().is_real() && x.field().is_real();
    if real {
        let r = theta.radians();
        let on_axis = r.abs() < 1e-12
            || (r - std::f64::consts::PI).abs() < 1e-12
            || (r - std::f64::consts::TAU).abs() < 1e-12;
        if !on_axis {
            return Err(OrthoError::RealFieldTheta(r));
        }
    }
    Ok(real)
}

/// Coefficients of the real-linear functional `y -> Re(rotor * w(y))` on the
/// real coordinates of `y` (`(Re y, Im y)` in the complex case).
fn realified(w: &DVector<Scalar>, rotor: Scalar, real_field: bool) -> DVector<Scalar> {
    let r = w.map(|c| rotor * c);
    if real_field {
        r.map(|c| Scalar::new(c.re, 0.0))
    } else {
        let n = r.len();
        DVector::from_fn(2 * n, |k, _| {
            if k < n {
                Scalar::new(r[k].re, 0.0)
            } else {
                Scalar::new(-r[k - n].im, 0.0)
            }
        })
    }
}

/// Left symmetry of `⊥_{T_theta}` at `x`.
///
/// Both `y -> (T_theta x, y)` and `y -> (T_theta y, x)` are real-linear; the
/// first kernel sits inside the second iff the second coefficient vector lies
/// in the real span of the first.
pub fn is_theta_left_symmetric_at(
    t: &PairingOperator,
    theta: ThetaDirection,
    x: &Vector,
    tol: f64,
) -> Result<bool> {
    let real_field = check_theta_field(t, x, theta)?;
    let f = Functionals::new(t, x, tol)?;
    let a = realified(&f.u, theta.rotor(), real_field);
    let b = realified(&f.v, theta.rotor(), real_field);
    Ok(contained(&b, &a, f.zero_level, tol).0)
}

/// `M = M^T` (bilinear transpose) up to `tol * ||M||_F`.
pub fn is_operator_symmetric(t: &PairingOperator, tol: f64) -> bool {
    let m = t.matrix();
    (m - m.transpose()).norm() <= tol * m.norm()
}

/// A vector with `(Tx, x) != 0`, or `None` when the quadratic form vanishes
/// identically (exactly when `M + M^T = 0`).
///
/// With `S = M + M^T`: `e_i` for the largest diagonal entry of `S` if one is
/// significant, else `e_i + e_j` for the largest off-diagonal entry, where
/// `Q(e_i + e_j) = S_ij`.
pub fn find_nonisotropic(t: &PairingOperator) -> Option<Vector> {
    let m = t.matrix();
    let s = m + m.transpose();
    let level = DEFAULT_TOL * m.norm();
    if s.norm() <= level {
        return None;
    }
    let n = t.n();
    let field = t.field();
    let (i, sii) = (0..n)
        .map(|i| (i, s[(i, i)].norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("n >= 1");
    let witness = if sii > level {
        Vector::basis(field, n, i)
    } else {
        let (i, j) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .max_by(|a, b| s[*a].norm().total_cmp(&s[*b].norm()).then(b.cmp(a)))
            .expect("off-diagonal entry exists when the diagonal vanishes");
        &Vector::basis(field, n, i) + &Vector::basis(field, n, j)
    };
    debug_assert!(!t.is_isotropic(&witness, DEFAULT_TOL).map(|r| r.verdict).unwrap_or(true));
    Some(witness)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceViolation {
    pub theta: f64,
    pub y: Vector,
    /// class of `y` relative to `x` in direction `theta`
    pub forward: SignClass,
    /// class of `x` relative to `y` in direction `theta - phi0`
    pub reversed: SignClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceReport {
    pub holds: bool,
    pub phi0: Option<f64>,
    pub counterexample: Option<HalfspaceViolation>,
    pub samples: usize,
}

/// Samples the half-space form of left symmetry: with `lambda = |lambda| e^{i phi0}`,
/// `y ∈ x_{T_theta}^± ⟹ x ∈ y_{T_{theta - phi0}}^±`.
///
/// Half of the sampled `y` are drawn from `ker Tx` so that the degenerate
/// clause (`y` in both half-spaces) is exercised. When `⊥_T` is not left
/// symmetric at `x` those draws expose a violation for every choice of `phi0`.
pub fn halfspace_symmetry_check(
    t: &PairingOperator,
    x: &Vector,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<HalfspaceReport> {
    let verdict = symmetry_at(t, x, tol)?;
    let f = Functionals::new(t, x, tol)?;
    let phi0 = verdict.scalar.map(|l| l.arg().rem_euclid(std::f64::consts::TAU));
    // without a symmetry scalar use the phase of the best least-squares fit
    let phase = phi0.unwrap_or_else(|| {
        let (c, _) = project(&f.u, &f.v);
        if c == ZERO {
            0.0
        } else {
            c.arg()
        }
    });

    let field = if t.field().is_real() && x.field().is_real() {
        ScalarField::Real
    } else {
        ScalarField::Complex
    };
    let kernel = if f.is_zero(&f.u) {
        Vec::new()
    } else {
        functional_kernel(&t.apply(x)?, 0.0).unwrap_or_default()
    };

    let mut rng = sampling::rng(seed);
    for k in 0..samples {
        let theta = match field {
            ScalarField::Real => {
                if rand::Rng::random_bool(&mut rng, 0.5) {
                    0.0
                } else {
                    std::f64::consts::PI
                }
            }
            ScalarField::Complex => rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::TAU),
        };
        let y = if k % 2 == 1 && !kernel.is_empty() {
            sampling::combination(&mut rng, field, &kernel).expect("nonempty kernel")
        } else {
            sampling::vector(&mut rng, field, t.n())
        };
        let theta = ThetaDirection::new(theta);
        let forward = t.sign_class(theta, x, &y, tol)?;
        let reversed = t.sign_class(theta.shifted_back(phase), &y, x, tol)?;
        let broken = (forward != SignClass::Minus && reversed == SignClass::Minus)
            || (forward != SignClass::Plus && reversed == SignClass::Plus);
        if broken {
            return Ok(HalfspaceReport {
                holds: false,
                phi0,
                counterexample: Some(HalfspaceViolation {
                    theta: theta.radians(),
                    y,
                    forward,
                    reversed,
                }),
                samples: k + 1,
            });
        }
    }
    Ok(HalfspaceReport { holds: true, phi0, counterexample: None, samples })
}
