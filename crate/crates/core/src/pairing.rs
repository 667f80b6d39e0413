//! The pairing operator `T: X -> X*` and the relations it induces.
//!
//! `T` is stored as a matrix `M` whose column `j` lists the coefficients of
//! `T(e_j)` in the dual basis, so `(Tx, y) = sum_j (Mx)_j y_j = y^T M x`. The
//! reversed pairing `(Ty, x)` is then `y^T (M^T x)`: the transpose carries it.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{OrthoError, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{decode_all, encode_all, Entry, Scalar, ScalarField, ZERO};
use crate::space::{DualVector, Vector};
use crate::OrthResult;

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    n: usize,
    field: ScalarField,
    columns: Vec<Vec<Entry>>,
}

/// A bounded linear map `X -> X*` in matrix form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct PairingOperator {
    field: ScalarField,
    matrix: Matrix,
    bijective: bool,
    norm: f64,
}

impl TryFrom<OperatorJson> for PairingOperator {
    type Error = OrthoError;
    fn try_from(raw: OperatorJson) -> Result<Self> {
        if raw.columns.len() != raw.n {
            return Err(OrthoError::DimensionMismatch { expected: raw.n, found: raw.columns.len() });
        }
        let columns = raw
            .columns
            .iter()
            .map(|c| decode_all(raw.field, c))
            .collect::<Result<Vec<_>>>()?;
        PairingOperator::from_columns(raw.field, columns)
    }
}

impl From<PairingOperator> for OperatorJson {
    fn from(t: PairingOperator) -> Self {
        OperatorJson {
            n: t.n(),
            field: t.field,
            columns: t
                .matrix
                .column_iter()
                .map(|c| encode_all(t.field, c.iter().copied()))
                .collect(),
        }
    }
}

/// Relative threshold of the rank test behind [`PairingOperator::is_bijective`].
pub const RANK_TOL: f64 = 1e-10;

impl PairingOperator {
    pub fn from_matrix(field: ScalarField, matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(OrthoError::DimensionMismatch {
                expected: matrix.ncols(),
                found: matrix.nrows(),
            });
        }
        if matrix.ncols() == 0 {
            return Err(OrthoError::EmptyDimension);
        }
        for &z in matrix.iter() {
            field.admit(z)?;
        }
        let bijective = linalg::rank(&matrix, RANK_TOL) == matrix.ncols();
        let norm = linalg::operator_norm(&matrix);
        Ok(Self { field, matrix, bijective, norm })
    }

    /// Builds `T` from the coefficient lists of `T(e_1), ..., T(e_n)`.
    pub fn from_columns(field: ScalarField, columns: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = columns.len();
        if n == 0 {
            return Err(OrthoError::EmptyDimension);
        }
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(OrthoError::DimensionMismatch { expected: n, found: bad.len() });
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| columns[j][i]);
        Self::from_matrix(field, matrix)
    }

    /// Real operator from a row-major matrix.
    pub fn real_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(OrthoError::DimensionMismatch { expected: n * n, found: rows.len() });
        }
        let m = DMatrix::from_row_slice(n, n, rows).map(|r| Scalar::new(r, 0.0));
        Self::from_matrix(ScalarField::Real, m)
    }

    pub fn identity(field: ScalarField, n: usize) -> Self {
        Self::from_matrix(field, Matrix::identity(n, n)).expect("identity is valid")
    }

    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Nonzero determinant, decided by a rank test at `1e-10 * sigma_max`.
    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    /// Operator 2-norm estimate used for tolerance scales.
    pub fn operator_norm(&self) -> f64 {
        self.norm
    }

    /// The operator with matrix `M^T`, i.e. `(T'x, y) = (Ty, x)`.
    pub fn transpose(&self) -> Self {
        Self {
            field: self.field,
            matrix: self.matrix.transpose(),
            bijective: self.bijective,
            norm: self.norm,
        }
    }

    fn conform(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.n() {
            return Err(OrthoError::DimensionMismatch { expected: self.n(), found: v.dim() });
        }
        Ok(())
    }

    fn result_field(&self, parts: &[&Vector]) -> ScalarField {
        if self.field.is_real() && parts.iter().all(|v| v.field().is_real()) {
            ScalarField::Real
        } else {
            ScalarField::Complex
        }
    }

    /// `Tx` as a functional.
    pub fn apply(&self, x: &Vector) -> Result<DualVector> {
        self.conform(x)?;
        Ok(DualVector::from_dvector(self.result_field(&[x]), &self.matrix * x.entries()))
    }

    /// `(Tx, y) = sum_j (Mx)_j y_j`.
    pub fn pair(&self, x: &Vector, y: &Vector) -> Result<Scalar> {
        self.conform(y)?;
        self.apply(x)?.apply(y)
    }

    /// `(T_theta x, y) = cos(theta) Re (Tx, y) + sin(theta) Im (Tx, y)`.
    pub fn pair_theta(&self, theta: ThetaDirection, x: &Vector, y: &Vector) -> Result<f64> {
        Ok(theta_part(theta, self.pair(x, y)?))
    }

    /// `1 + ||M|| ||x|| ||y||` with Euclidean lengths of the coefficient lists.
    pub fn scale(&self, x: &Vector, y: &Vector) -> f64 {
        1.0 + self.norm * x.euclidean_norm() * y.euclidean_norm()
    }

    pub fn is_t_orthogonal(&self, x: &Vector, y: &Vector, tol: f64) -> Result<OrthResult> {
        let value = self.pair(x, y)?;
        let gap = value.norm() / self.scale(x, y);
        Ok(OrthResult::scalar(gap <= tol, gap, value))
    }

    pub fn is_t_theta_orthogonal(
        &self,
        theta: ThetaDirection,
        x: &Vector,
        y: &Vector,
        tol: f64,
    ) -> Result<OrthResult> {
        let value = self.pair_theta(theta, x, y)?;
        let gap = value.abs() / self.scale(x, y);
        Ok(OrthResult::scalar(gap <= tol, gap, Scalar::new(value, 0.0)))
    }

    /// A direction `theta` with `x ⊥_{T_theta} y`.
    ///
    /// With `(Tx, y) = a + ib` this is `atan2(a, -b)` reduced to `[0, 2 pi)`. When
    /// the pairing vanishes every direction works; `0` is returned and flagged.
    pub fn theta_direction(&self, x: &Vector, y: &Vector) -> Result<ThetaSolution> {
        let value = self.pair(x, y)?;
        if value == ZERO {
            return Ok(ThetaSolution { theta: ThetaDirection::new(0.0), degenerate: true });
        }
        Ok(ThetaSolution {
            theta: ThetaDirection::new(value.re.atan2(-value.im)),
            degenerate: false,
        })
    }

    /// Which of the half-spaces `x_{T_theta}^+` / `x_{T_theta}^-` contains `y`.
    pub fn sign_class(
        &self,
        theta: ThetaDirection,
        x: &Vector,
        y: &Vector,
        tol: f64,
    ) -> Result<SignClass> {
        let value = self.pair_theta(theta, x, y)?;
        Ok(SignClass::of(value, tol * self.scale(x, y)))
    }

    /// `(Tx, x) = 0`, relative to `1 + ||M|| ||x||^2`.
    pub fn is_isotropic(&self, x: &Vector, tol: f64) -> Result<OrthResult> {
        self.is_t_orthogonal(x, x, tol)
    }

    /// A basis of `x^{⊥_T} = ker (Tx)`, a hyperplane whenever `Tx != 0`.
    ///
    /// Pivoted elimination on the single row `Mx`: with `k` the entry of largest
    /// modulus, the vectors `e_j - (w_j / w_k) e_k` for `j != k` span the kernel
    /// and every multiplier has modulus at most one.
    pub fn t_perp_basis(&self, x: &Vector) -> Result<Vec<Vector>> {
        let w = self.apply(x)?;
        functional_kernel(&w, self.norm * x.euclidean_norm())
    }
}

/// Kernel basis of a functional; `reference` is the size below which `w` is
/// treated as zero (relative to machine precision).
pub(crate) fn functional_kernel(w: &DualVector, reference: f64) -> Result<Vec<Vector>> {
    let coeffs = w.entries();
    let (k, wk) = coeffs
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty functional");
    if wk.norm() <= f64::EPSILON * reference || wk == ZERO {
        return Err(OrthoError::FullSpacePerp);
    }
    let n = w.dim();
    let field = w.field();
    Ok((0..n)
        .filter(|&j| j != k)
        .map(|j| {
            let mut b = Vector::basis(field, n, j).entries().clone();
            b[k] = -coeffs[j] / wk;
            Vector::from_dvector(field, b)
        })
        .collect())
}

pub(crate) fn theta_part(theta: ThetaDirection, value: Scalar) -> f64 {
    let t = theta.radians();
    t.cos() * value.re + t.sin() * value.im
}

/// A direction `theta`, always stored reduced into `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct ThetaDirection(f64);

impl ThetaDirection {
    pub fn new(theta: f64) -> Self {
        let r = theta.rem_euclid(TAU);
        // rem_euclid can round up to TAU itself for tiny negative inputs
        Self(if r >= TAU { 0.0 } else { r })
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `theta - phi`, reduced.
    pub fn shifted_back(self, phi: f64) -> Self {
        Self::new(self.0 - phi)
    }

    /// `e^{-i theta}`: `(T_theta x, y) = Re(e^{-i theta} (Tx, y))`.
    pub fn rotor(self) -> Scalar {
        Scalar::from_polar(1.0, -self.0)
    }
}

impl From<f64> for ThetaDirection {
    fn from(t: f64) -> Self {
        Self::new(t)
    }
}

impl From<ThetaDirection> for f64 {
    fn from(t: ThetaDirection) -> f64 {
        t.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSolution {
    pub theta: ThetaDirection,
    /// The pairing vanished, so every direction qualifies.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Plus,
    Minus,
    Zero,
}

impl SignClass {
    pub fn of(value: f64, threshold: f64) -> Self {
        if value.abs() <= threshold {
            SignClass::Zero
        } else if value > 0.0 {
            SignClass::Plus
        } else {
            SignClass::Minus
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SignClass::Plus => SignClass::Minus,
            SignClass::Minus => SignClass::Plus,
            SignClass::Zero => SignClass::Zero,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::ONE;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn first_c2_pairing_value() {
        let t = fixtures::basic_c2_operator();
        let x = Vector::complex(&[(0.0, 0.0), (1.0, 0.0)]);
        let y = Vector::complex(&[(0.5, 0.0), (-1.0 / 3.0, 0.0)]);
        let v = t.pair(&x, &y).unwrap();
        assert!((v - Scalar::new(1.0, -1.0)).norm() < 1e-15);
        assert!(t.pair_theta(ThetaDirection::new(FRAC_PI_4), &x, &y).unwrap().abs() < 1e-15);
        assert!(!t.is_t_orthogonal(&x, &y, 1e-8).unwrap().verdict);
        assert!(t.is_t_theta_orthogonal(FRAC_PI_4.into(), &x, &y, 1e-8).unwrap().verdict);
        let sol = t.theta_direction(&x, &y).unwrap();
        assert!(!sol.degenerate);
        assert!((sol.theta.radians() - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_pairs_to_zero() {
        let t = fixtures::basic_c2_operator();
        let y = Vector::complex(&[(0.3, 1.0), (2.0, -1.0)]);
        assert_eq!(t.pair(&Vector::zeros(ScalarField::Complex, 2), &y).unwrap(), ZERO);
    }

    #[test]
    fn nonbijective_l2_pairing() {
        let t = fixtures::nonbijective_l2_operator();
        assert!(!t.is_bijective());
        let e1 = Vector::real(&[1.0, 0.0]);
        let d = Vector::real(&[1.0, 1.0]);
        assert_eq!(t.pair(&e1, &d).unwrap(), ZERO);
        assert_eq!(t.pair(&d, &e1).unwrap(), Scalar::new(3.0, 0.0));
        assert!(t.is_t_orthogonal(&e1, &d, 1e-8).unwrap().verdict);
    }

    #[test]
    fn rotated_c2_directional_values() {
        let t = fixtures::rotated_c2_operator();
        let e1 = Vector::complex(&[(1.0, 0.0), (0.0, 0.0)]);
        let w = Vector::complex(&[(1.0, 0.0), (0.0, 1.0)]);
        let half_pi = ThetaDirection::new(FRAC_PI_2);
        assert!(t.pair_theta(half_pi, &e1, &w).unwrap().abs() < 1e-15);
        assert!((t.pair_theta(half_pi, &w, &e1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(t.sign_class(half_pi, &e1, &w, 1e-8).unwrap(), SignClass::Zero);
        assert_eq!(t.sign_class(half_pi, &w, &e1, 1e-8).unwrap(), SignClass::Plus);
        assert_eq!(t.sign_class(half_pi, &w, &(-&e1), 1e-8).unwrap(), SignClass::Minus);
    }

    #[test]
    fn theta_direction_conventions() {
        let t = PairingOperator::identity(ScalarField::Real, 1);
        let x = Vector::real(&[2.0]);
        let sol = t.theta_direction(&x, &x).unwrap();
        assert!((sol.theta.radians() - FRAC_PI_2).abs() < 1e-15);
        let z = Vector::real(&[0.0]);
        let sol = t.theta_direction(&x, &z).unwrap();
        assert!(sol.degenerate);
        assert_eq!(sol.theta.radians(), 0.0);
    }

    #[test]
    fn theta_reduction() {
        assert!((ThetaDirection::new(-FRAC_PI_2).radians() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!((ThetaDirection::new(5.0 * PI).radians() - PI).abs() < 1e-12);
        assert!(ThetaDirection::new(-1e-300).radians() < TAU);
    }

    #[test]
    fn isotropy_examples() {
        let e1r = Vector::real(&[1.0, 0.0]);
        let e1c = Vector::complex(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(fixtures::rotated_c2_operator().is_isotropic(&e1c, 1e-8).unwrap().verdict);
        assert!(fixtures::lemma_counterexample_operator().is_isotropic(&e1r, 1e-8).unwrap().verdict);
        let id = PairingOperator::identity(ScalarField::Real, 2);
        let r = id.is_isotropic(&Vector::real(&[0.5, -2.0]), 1e-8).unwrap();
        assert!(!r.verdict);
    }

    #[test]
    fn perp_basis_examples() {
        let id = PairingOperator::identity(ScalarField::Real, 2);
        let b = id.t_perp_basis(&Vector::real(&[1.0, 0.0])).unwrap();
        assert_eq!(b, vec![Vector::real(&[0.0, 1.0])]);

        let t = fixtures::nonbijective_l2_operator();
        let b = t.t_perp_basis(&Vector::real(&[1.0, 0.0])).unwrap();
        assert_eq!(b, vec![Vector::real(&[1.0, 1.0])]);

        let t = fixtures::rotated_c2_operator();
        let b = t.t_perp_basis(&Vector::complex(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].entries()[0], ONE);
        assert_eq!(b[0].entries()[1], ZERO);
    }

    #[test]
    fn perp_of_kernel_vector_is_whole_space() {
        let t = fixtures::nonbijective_l2_operator();
        // M (2, -1) = 0
        assert_eq!(t.t_perp_basis(&Vector::real(&[2.0, -1.0])), Err(OrthoError::FullSpacePerp));
    }

    #[test]
    fn operator_json_is_column_major() {
        let t = fixtures::basic_c2_operator();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"field":"complex","columns":[[[0.0,7.0],[1.0,0.0]],[[2.0,0.0],[0.0,3.0]]]}"#
        );
        let back: PairingOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<PairingOperator>(
            r#"{"n":2,"field":"real","columns":[[1,2]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<PairingOperator>(
            r#"{"n":2,"field":"real","columns":[[1,2],[3]]}"#
        )
        .is_err());
    }

    #[test]
    fn dimension_mismatch_reported() {
        let id = PairingOperator::identity(ScalarField::Real, 3);
        assert_eq!(
            id.pair(&Vector::real(&[1.0, 0.0]), &Vector::real(&[1.0, 0.0, 0.0])),
            Err(OrthoError::DimensionMismatch { expected: 3, found: 2 })
        );
    }
}
