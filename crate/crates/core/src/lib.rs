//! Computable T-orthogonality on finite-dimensional `l_p` spaces.
//!
//! A bounded linear map `T: X -> X*` induces the relation `x ⊥_T y` iff
//! `(Tx)(y) = 0`. On `l_p^n` such a map is an `n x n` matrix `M` acting through
//! the bilinear pairing `(Tx, y) = sum_j (Mx)_j y_j`. This crate decides that
//! relation and its directional variant, locates left and right symmetry
//! points, tests which operators preserve the relation, and compares it with
//! the metric notions of orthogonality (Birkhoff-James, isosceles) that single
//! out Hilbert spaces.
//!
//! * [`space`]: norms, duality maps, Birkhoff-James and isosceles tests.
//! * [`pairing`]: the pairing operator and every relation derived from it.
//! * [`symmetry`]: symmetry points and the symmetry scalar.
//! * [`preserve`]: T-isometries, orthogonality preservers, Hilbert-space probes.
//! * [`verify`]: randomized property suites for each structural result.
//! * [`fixtures`]: the hand-worked operators and their stated properties.
//! * [`cli`]: the `banach-ortho` command-line front end.
//!
//! Complex scalars act bilinearly: no conjugation appears in `(Tx, y)` or in
//! `f(x)`. Conjugation only shows up inside the duality-map formulas.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod pairing;
pub mod preserve;
pub mod sampling;
pub mod scalar;
pub mod space;
pub mod symmetry;
pub mod verify;

use serde::{Deserialize, Serialize};

pub use error::{OrthoError, Result};
pub use pairing::{PairingOperator, SignClass, ThetaDirection};
pub use scalar::{Scalar, ScalarField};
pub use space::{DualVector, PNormSpace, Vector};

/// Default relative tolerance for every orthogonality verdict.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Scalar(#[serde(with = "scalar::pair_repr")] Scalar),
    Vector(Vector),
}

/// A yes/no decision with the number it was based on.
///
/// `verdict` is true exactly when `gap` is at most the tolerance handed to the
/// operation that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthResult {
    pub verdict: bool,
    pub gap: f64,
    pub witness: Option<Witness>,
}

impl OrthResult {
    pub(crate) fn bare(verdict: bool, gap: f64) -> Self {
        Self { verdict, gap, witness: None }
    }

    pub(crate) fn scalar(verdict: bool, gap: f64, w: Scalar) -> Self {
        Self { verdict, gap, witness: Some(Witness::Scalar(w)) }
    }
}
