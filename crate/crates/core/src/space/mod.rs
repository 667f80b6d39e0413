//! Finite-dimensional `l_p` spaces over the reals or the complex numbers.
//!
//! Besides the norm itself this module provides the duality map (the unique
//! norming functional at a point of a smooth space), its inverse, and the two
//! metric orthogonality relations used throughout the crate: Birkhoff-James
//! orthogonality, decided by minimizing `||x + t y||` over scalars `t`, and
//! isosceles orthogonality `||x + y|| = ||x - y||`.

mod minimize;
mod vector;

use serde::{Deserialize, Serialize};

pub use minimize::{golden_section, minimize_disk};
pub use vector::{DualVector, Vector};

use crate::error::{OrthoError, Result};
use crate::scalar::{unit_phase, Scalar, ScalarField, ZERO};
use crate::OrthResult;

/// `l_p^n` over the chosen field, `1 <= p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub struct PNormSpace {
    n: usize,
    p: f64,
    field: ScalarField,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentJson {
    Finite(f64),
    Named(String),
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    n: usize,
    p: ExponentJson,
    field: ScalarField,
}

impl TryFrom<SpaceJson> for PNormSpace {
    type Error = OrthoError;
    fn try_from(raw: SpaceJson) -> Result<Self> {
        let p = match raw.p {
            ExponentJson::Finite(p) => p,
            ExponentJson::Named(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => {
                f64::INFINITY
            }
            ExponentJson::Named(s) => {
                return Err(OrthoError::Malformed(format!("exponent {s:?}")));
            }
        };
        PNormSpace::new(raw.n, p, raw.field)
    }
}

impl From<PNormSpace> for SpaceJson {
    fn from(s: PNormSpace) -> Self {
        let p = if s.p.is_infinite() {
            ExponentJson::Named("inf".into())
        } else {
            ExponentJson::Finite(s.p)
        };
        SpaceJson { n: s.n, p, field: s.field }
    }
}

impl PNormSpace {
    pub fn new(n: usize, p: f64, field: ScalarField) -> Result<Self> {
        if n == 0 {
            return Err(OrthoError::EmptyDimension);
        }
        if p.is_nan() || p < 1.0 {
            return Err(OrthoError::InvalidExponent(p));
        }
        Ok(Self { n, p, field })
    }

    pub fn real(n: usize, p: f64) -> Result<Self> {
        Self::new(n, p, ScalarField::Real)
    }

    pub fn complex(n: usize, p: f64) -> Result<Self> {
        Self::new(n, p, ScalarField::Complex)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual_exponent(&self) -> f64 {
        conjugate_exponent(self.p)
    }

    /// True when the duality map is single-valued everywhere, i.e. `1 < p < inf`.
    pub fn has_unique_duality(&self) -> bool {
        self.p > 1.0 && self.p.is_finite()
    }

    fn conform(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(OrthoError::DimensionMismatch { expected: self.n, found: len });
        }
        Ok(())
    }

    fn conform_vector(&self, x: &Vector) -> Result<()> {
        self.conform(x.dim())?;
        if self.field.is_real() && !x.field().is_real() {
            return Err(OrthoError::FieldMismatch {
                detail: "complex vector in a real space".into(),
            });
        }
        Ok(())
    }

    fn require_smooth(&self) -> Result<()> {
        if self.has_unique_duality() {
            Ok(())
        } else {
            Err(OrthoError::NonSmoothExponent(self.p))
        }
    }

    pub fn p_norm(&self, x: &Vector) -> Result<f64> {
        self.conform(x.dim())?;
        Ok(lp_norm(x.entries().iter().map(|z| z.norm()), self.p))
    }

    /// Norm of a functional: the `l_q` norm of its coefficients.
    pub fn dual_norm(&self, f: &DualVector) -> Result<f64> {
        self.conform(f.dim())?;
        Ok(lp_norm(f.entries().iter().map(|z| z.norm()), self.dual_exponent()))
    }

    /// The norming functional at `x`, scaled to unit dual norm.
    ///
    /// `f_i = conj(sgn x_i) |x_i|^(p-1) / ||x||^(p-1)`, so `f(x) = ||x||` and `||f||_q = 1`.
    /// Multiply by `||x||` to get the duality-map element with `||f|| = ||x||`.
    pub fn support_functional(&self, x: &Vector) -> Result<DualVector> {
        self.require_smooth()?;
        self.conform_vector(x)?;
        let norm = self.p_norm(x)?;
        if norm == 0.0 {
            return Err(OrthoError::ZeroVector("x"));
        }
        let p = self.p;
        let entries = x
            .entries()
            .map(|z| {
                let r = z.norm() / norm;
                unit_phase(z).conj() * r.powf(p - 1.0)
            });
        Ok(DualVector::from_dvector(x.field(), entries))
    }

    /// Unit vector `z` with `|f(z)| = ||f||_q`: the inverse of the duality map.
    pub fn inverse_duality(&self, f: &DualVector) -> Result<Vector> {
        self.require_smooth()?;
        self.conform(f.dim())?;
        let fnorm = self.dual_norm(f)?;
        if fnorm == 0.0 {
            return Err(OrthoError::ZeroVector("f"));
        }
        let q = self.dual_exponent();
        let raw = f.entries().map(|c| unit_phase(c).conj() * (c.norm() / fnorm).powf(q - 1.0));
        let znorm = lp_norm(raw.iter().map(|z| z.norm()), self.p);
        Ok(Vector::from_dvector(f.field(), raw / Scalar::new(znorm, 0.0)))
    }

    /// Canonical representative of the unit vectors at which `f` attains its
    /// norm. In a strictly convex smooth space this set is a single phase orbit
    /// `{e^(i t) z}`, so the representative coincides with [`Self::inverse_duality`].
    pub fn norm_attainment_direction(&self, f: &DualVector) -> Result<Vector> {
        self.inverse_duality(f)
    }

    /// Minimizes `||x + t y||` over scalars `t` of the space's field.
    ///
    /// Returns `(t*, m)`. The search is confined to `|t| <= 2||x||/||y||`, outside
    /// of which the objective exceeds `||x||`. The result never exceeds `||x||`.
    pub fn bj_minimize(&self, x: &Vector, y: &Vector) -> Result<(Scalar, f64)> {
        self.conform_vector(x)?;
        self.conform_vector(y)?;
        let ny = self.p_norm(y)?;
        if ny == 0.0 {
            return Err(OrthoError::ZeroVector("y"));
        }
        let nx = self.p_norm(x)?;
        let radius = 2.0 * nx / ny;
        let width = 1e-12 * (1.0 + nx);
        let p = self.p;
        let (xs, ys) = (x.entries(), y.entries());
        let eval = |t: Scalar| lp_norm(xs.iter().zip(ys.iter()).map(|(a, b)| (a + t * b).norm()), p);

        let (t, m) = if self.field.is_real() {
            let (t, m) = golden_section(|t| eval(Scalar::new(t, 0.0)), -radius, radius, width);
            (Scalar::new(t, 0.0), m)
        } else {
            let ((u, v), m) = minimize_disk(|u, v| eval(Scalar::new(u, v)), radius, width);
            (Scalar::new(u, v), m)
        };
        Ok(if m < nx { (t, m) } else { (ZERO, nx) })
    }

    /// Birkhoff-James orthogonality `x ⊥_B y` decided by minimization.
    ///
    /// `gap = (||x|| - min_t ||x + t y||) / ||x||`; orthogonal iff `gap <= tol`.
    pub fn is_bj_orthogonal(&self, x: &Vector, y: &Vector, tol: f64) -> Result<OrthResult> {
        let nx = self.p_norm(x)?;
        if nx == 0.0 {
            return Err(OrthoError::ZeroVector("x"));
        }
        let (t, m) = self.bj_minimize(x, y)?;
        let gap = ((nx - m) / nx).max(0.0);
        Ok(OrthResult::scalar(gap <= tol, gap, t))
    }

    /// Birkhoff-James orthogonality decided through the norming functional,
    /// valid in smooth spaces: `x ⊥_B y` iff `J(x)(y) = 0`.
    ///
    /// `gap = |f(y)| / ||y||` with `f` the unit support functional at `x`, which
    /// makes the verdict invariant under rescaling of either argument.
    pub fn is_bj_orthogonal_smooth(&self, x: &Vector, y: &Vector, tol: f64) -> Result<OrthResult> {
        let f = self.support_functional(x)?;
        self.conform_vector(y)?;
        let ny = self.p_norm(y)?;
        if ny == 0.0 {
            return Err(OrthoError::ZeroVector("y"));
        }
        let value = f.apply(y)?;
        let gap = value.norm() / ny;
        Ok(OrthResult::scalar(gap <= tol, gap, value))
    }

    /// Isosceles orthogonality `||x + y|| = ||x - y||`, relative to the larger side.
    pub fn is_isosceles_orthogonal(&self, x: &Vector, y: &Vector, tol: f64) -> Result<OrthResult> {
        self.conform_vector(x)?;
        self.conform_vector(y)?;
        let plus = self.p_norm(&(x + y))?;
        let minus = self.p_norm(&(x - y))?;
        let gap = (plus - minus).abs() / plus.max(minus).max(1.0);
        Ok(OrthResult::bare(gap <= tol, gap))
    }

    /// `(smooth, strictly_convex)`; both hold exactly when `1 < p < inf` or `n = 1`.
    pub fn space_properties(&self) -> (bool, bool) {
        let regular = self.n == 1 || self.has_unique_duality();
        (regular, regular)
    }
}

pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `(sum a_i^p)^(1/p)` for nonnegative `a_i`, rescaled by the largest entry so
/// that neither overflow nor underflow occurs for moderate `p`.
pub(crate) fn lp_norm(moduli: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    let top = moduli.clone().fold(0.0_f64, f64::max);
    if p.is_infinite() || top == 0.0 {
        return top;
    }
    if p == 1.0 {
        return moduli.sum();
    }
    if p == 2.0 {
        return top * moduli.map(|a| (a / top) * (a / top)).sum::<f64>().sqrt();
    }
    top * moduli.map(|a| (a / top).powf(p)).sum::<f64>().powf(1.0 / p)
}
