//! Operators that preserve `⊥_T`, and numerical probes of when `⊥_T` can
//! coincide with Birkhoff-James orthogonality.
//!
//! The adjoint of `A: X -> X` acts on functionals by `(A* f)(x) = f(Ax)`, which
//! in dual coordinates is the plain transpose (no conjugation, matching the
//! bilinear pairing). So `A* T A` has matrix `A^T M A`, and `A` is a T-isometry
//! when that equals `M`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{OrthoError, Result};
use crate::linalg::{smallest_right_singular, Matrix};
use crate::pairing::{functional_kernel, PairingOperator};
use crate::sampling;
use crate::scalar::{decode_all, encode_all, Entry, Scalar, ScalarField, ONE, ZERO};
use crate::space::{PNormSpace, Vector};
use crate::DEFAULT_TOL;

#[derive(Serialize, Deserialize)]
struct EndoJson {
    n: usize,
    field: ScalarField,
    columns: Vec<Vec<Entry>>,
}

/// A linear map `X -> X`; column `j` holds `A e_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EndoJson", into = "EndoJson")]
pub struct EndoOperator {
    field: ScalarField,
    matrix: Matrix,
}

impl TryFrom<EndoJson> for EndoOperator {
    type Error = OrthoError;
    fn try_from(raw: EndoJson) -> Result<Self> {
        if raw.columns.len() != raw.n || raw.columns.iter().any(|c| c.len() != raw.n) {
            return Err(OrthoError::Malformed(format!("expected {0} columns of length {0}", raw.n)));
        }
        let cols = raw
            .columns
            .iter()
            .map(|c| decode_all(raw.field, c))
            .collect::<Result<Vec<_>>>()?;
        EndoOperator::new(raw.field, DMatrix::from_fn(raw.n, raw.n, |i, j| cols[j][i]))
    }
}

impl From<EndoOperator> for EndoJson {
    fn from(a: EndoOperator) -> Self {
        EndoJson {
            n: a.n(),
            field: a.field,
            columns: a.matrix.column_iter().map(|c| encode_all(a.field, c.iter().copied())).collect(),
        }
    }
}

impl EndoOperator {
    pub fn new(field: ScalarField, matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(OrthoError::DimensionMismatch { expected: matrix.ncols(), found: matrix.nrows() });
        }
        if matrix.ncols() == 0 {
            return Err(OrthoError::EmptyDimension);
        }
        for &z in matrix.iter() {
            field.admit(z)?;
        }
        Ok(Self { field, matrix })
    }

    /// Real operator from a row-major matrix.
    pub fn real_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(OrthoError::DimensionMismatch { expected: n * n, found: rows.len() });
        }
        Self::new(ScalarField::Real, DMatrix::from_row_slice(n, n, rows).map(|r| Scalar::new(r, 0.0)))
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(ScalarField::Real, sampling::complexify(m))
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

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.n() {
            return Err(OrthoError::DimensionMismatch { expected: self.n(), found: x.dim() });
        }
        let field = if self.field.is_real() && x.field().is_real() {
            ScalarField::Real
        } else {
            ScalarField::Complex
        };
        Ok(Vector::from_dvector(field, &self.matrix * x.entries()))
    }

    /// `self * other` as maps: `x -> self(other(x))`.
    pub fn compose(&self, other: &EndoOperator) -> Result<EndoOperator> {
        if self.n() != other.n() {
            return Err(OrthoError::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        Self::new(join(self.field, other.field), &self.matrix * &other.matrix)
    }

    pub fn scaled(&self, c: Scalar) -> EndoOperator {
        let field = if c.im != 0.0 { ScalarField::Complex } else { self.field };
        Self { field, matrix: &self.matrix * c }
    }
}

fn join(a: ScalarField, b: ScalarField) -> ScalarField {
    if a.is_real() && b.is_real() {
        ScalarField::Real
    } else {
        ScalarField::Complex
    }
}

/// `A* T A`, the pairing `(x, y) -> (T Ax, Ay)`, with matrix `A^T M A`.
pub fn adjoint_conjugate(t: &PairingOperator, a: &EndoOperator) -> Result<PairingOperator> {
    if t.n() != a.n() {
        return Err(OrthoError::DimensionMismatch { expected: t.n(), found: a.n() });
    }
    let m = a.matrix().transpose() * t.matrix() * a.matrix();
    PairingOperator::from_matrix(join(t.field(), a.field()), m)
}

/// `||A^T M A - M||_F <= tol ||M||_F`.
pub fn is_t_isometry(t: &PairingOperator, a: &EndoOperator, tol: f64) -> Result<bool> {
    let n = adjoint_conjugate(t, a)?;
    Ok((n.matrix() - t.matrix()).norm() <= tol * t.matrix().norm())
}

/// `beta` with `M = beta A^T M A`, when the two matrices are collinear.
pub fn preserver_scalar(t: &PairingOperator, a: &EndoOperator, tol: f64) -> Result<Option<Scalar>> {
    let n = adjoint_conjugate(t, a)?;
    let (m, nm) = (t.matrix(), n.matrix());
    let nn = nm.norm_squared();
    if nn <= f64::EPSILON * f64::EPSILON * m.norm_squared() || nn == 0.0 {
        return Ok(None);
    }
    let beta = nm.dotc(m) / Scalar::new(nn, 0.0);
    let residual = (m - nm * beta).norm();
    Ok((residual <= tol * m.norm()).then_some(beta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreservationFailure {
    /// `x ⊥_T y` but not `Ax ⊥_T Ay`
    Forward,
    /// `Ax ⊥_T Ay` but not `x ⊥_T y`
    Backward,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: Vector,
    pub y: Vector,
    pub failure: PreservationFailure,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub samples: usize,
}

/// Samples `x ⊥_T y ⟺ Ax ⊥_T Ay`.
///
/// Each sample draws `x` at random and `y` from `ker Tx` (so `x ⊥_T y` holds
/// exactly) to test the forward implication, then `y'` from the kernel of
/// `y -> (TAx, Ay)` to test the backward one. The first violation is returned.
pub fn preserves_t_orthogonality_sampled(
    t: &PairingOperator,
    a: &EndoOperator,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<PreservationReport> {
    let conj = adjoint_conjugate(t, a)?;
    let field = join(t.field(), a.field());
    let n = t.n();
    let mut rng = sampling::rng(seed);

    let draw_perp = |rng: &mut sampling::SuiteRng, op: &PairingOperator, x: &Vector| {
        let reference = op.operator_norm() * x.euclidean_norm();
        match functional_kernel(&op.apply(x).expect("conforming"), reference) {
            Ok(basis) if !basis.is_empty() => {
                sampling::combination(rng, field, &basis).expect("nonempty")
            }
            // x is orthogonal to everything (or n = 1): any y will do
            _ => sampling::vector(rng, field, n),
        }
    };

    for k in 0..samples {
        let x = sampling::vector(&mut rng, field, n);

        let y = draw_perp(&mut rng, t, &x);
        let image = t.is_t_orthogonal(&a.apply(&x)?, &a.apply(&y)?, tol)?;
        if !image.verdict {
            return Ok(PreservationReport {
                holds: false,
                counterexample: Some(Counterexample {
                    x,
                    y,
                    failure: PreservationFailure::Forward,
                    gap: image.gap,
                }),
                samples: k + 1,
            });
        }

        let y = draw_perp(&mut rng, &conj, &x);
        let source = t.is_t_orthogonal(&x, &y, tol)?;
        if !source.verdict {
            return Ok(PreservationReport {
                holds: false,
                counterexample: Some(Counterexample {
                    x,
                    y,
                    failure: PreservationFailure::Backward,
                    gap: source.gap,
                }),
                samples: k + 1,
            });
        }
    }
    Ok(PreservationReport { holds: true, counterexample: None, samples })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum PreserverClass {
    /// `M = beta A^T M A`: `A` is a scalar multiple of a T-isometry.
    IsometryMultiple {
        #[serde(with = "crate::scalar::pair_repr")]
        beta: Scalar,
    },
    NotPreserving { counterexample: Counterexample },
    /// Singular `T`, or sampling and the algebraic test disagree.
    Inconclusive { reason: String },
}

/// Combines [`preserver_scalar`] with sampling. Only bijective `T` gets a
/// definite answer.
pub fn classify_preserver(
    t: &PairingOperator,
    a: &EndoOperator,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<PreserverClass> {
    if !t.is_bijective() {
        return Ok(PreserverClass::Inconclusive { reason: "T is not bijective".into() });
    }
    let beta = preserver_scalar(t, a, tol)?;
    let sampled = preserves_t_orthogonality_sampled(t, a, samples, seed, tol)?;
    Ok(match (beta, sampled.counterexample) {
        (Some(beta), None) if beta != ZERO => PreserverClass::IsometryMultiple { beta },
        (None, Some(counterexample)) => PreserverClass::NotPreserving { counterexample },
        (Some(_), Some(_)) => PreserverClass::Inconclusive {
            reason: "collinear with A^T M A yet a sampled pair is not preserved".into(),
        },
        _ => PreserverClass::Inconclusive {
            reason: "no counterexample sampled but A^T M A is not a multiple of M".into(),
        },
    })
}

/// Best pairing matrix for the sampled implication `x ⊥_B y ⟹ x ⊥_T y`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Frobenius-normalized fitted pairing.
    pub m_fit: PairingOperator,
    /// Smallest singular value of the stacked constraint system.
    pub residual: f64,
    pub samples: usize,
    pub p: f64,
    pub seed: u64,
}

impl Serialize for FitReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            p: f64,
            samples: usize,
            seed: u64,
            residual: f64,
            m_fit: Vec<Vec<Entry>>,
        }
        let field = self.m_fit.field();
        Out {
            p: self.p,
            samples: self.samples,
            seed: self.seed,
            residual: self.residual,
            m_fit: self
                .m_fit
                .matrix()
                .column_iter()
                .map(|c| encode_all(field, c.iter().copied()))
                .collect(),
        }
        .serialize(s)
    }
}

fn unit_p(space: &PNormSpace, v: &Vector) -> Result<Vector> {
    let norm = space.p_norm(v)?;
    Ok(v.scaled(Scalar::new(1.0 / norm, 0.0)))
}

/// A random pair `x ⊥_B y` in a smooth space, both of unit norm.
fn bj_pair(space: &PNormSpace, rng: &mut sampling::SuiteRng) -> Result<(Vector, Vector)> {
    let x = unit_p(space, &sampling::vector(rng, space.field(), space.n()))?;
    let f = space.support_functional(&x)?;
    let basis = functional_kernel(&f, 1.0)?;
    let y = sampling::combination(rng, space.field(), &basis).expect("n >= 2");
    Ok((x, unit_p(space, &y)?))
}

/// Fits a pairing matrix to sampled Birkhoff-James orthogonal pairs.
///
/// Every pair `x ⊥_B y` contributes the linear constraint
/// `sum_ij M_ij y_i x_j = 0` on the `n^2` entries of `M`. The smallest singular
/// value of the stacked system measures how far the best unit-Frobenius `M`
/// is from satisfying all of them; its right singular vector is the fit.
pub fn hilbert_fit(space: &PNormSpace, samples: usize, seed: u64) -> Result<FitReport> {
    if !space.has_unique_duality() {
        return Err(OrthoError::NonSmoothExponent(space.p()));
    }
    let n = space.n();
    if n < 2 {
        return Err(OrthoError::Unsupported("dimension at least 2".into()));
    }
    let unknowns = n * n;
    if samples < unknowns {
        return Err(OrthoError::TooFewSamples { needed: unknowns, got: samples });
    }
    let mut rng = sampling::rng(seed);
    let mut rows = Matrix::zeros(samples, unknowns);
    for k in 0..samples {
        let (x, y) = bj_pair(space, &mut rng)?;
        for j in 0..n {
            for i in 0..n {
                rows[(k, i + j * n)] = y.entries()[i] * x.entries()[j];
            }
        }
    }

    let (residual, v) = if space.field().is_real() {
        let real = rows.map(|z| z.re);
        let svd = real.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let (k, sigma) = svd
            .singular_values
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        (sigma, vt.row(k).transpose().map(|r| Scalar::new(r, 0.0)))
    } else {
        smallest_right_singular(&rows)
    };

    let m_fit = PairingOperator::from_matrix(space.field(), canonical_phase(v).reshape_generic(
        nalgebra::Dyn(n),
        nalgebra::Dyn(n),
    ))?;
    Ok(FitReport { m_fit, residual, samples, p: space.p(), seed })
}

/// Unit vector rotated so that its largest entry is real and positive.
fn canonical_phase(v: DVector<Scalar>) -> DVector<Scalar> {
    let top = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(ONE);
    let len = v.norm();
    if top == ZERO || len == 0.0 {
        return v;
    }
    let rot = (top / top.norm()).conj() / len;
    v.map(|z| {
        let w = z * rot;
        if w.im.abs() < 1e-300 {
            Scalar::new(w.re, 0.0)
        } else {
            w
        }
    })
}

/// Reverse spot check of a fit: samples `x ⊥_T y` for the fitted pairing and
/// returns the largest smooth-space BJ gap `|J(x)(y)| / ||y||` observed.
pub fn fit_reverse_gap(space: &PNormSpace, report: &FitReport, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let t = &report.m_fit;
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let x = unit_p(space, &sampling::vector(&mut rng, space.field(), space.n()))?;
        let basis = match t.t_perp_basis(&x) {
            Ok(b) => b,
            Err(OrthoError::FullSpacePerp) => continue,
            Err(e) => return Err(e),
        };
        let Some(y) = sampling::combination(&mut rng, space.field(), &basis) else { continue };
        worst = worst.max(space.is_bj_orthogonal_smooth(&x, &y, DEFAULT_TOL)?.gap);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationDeviation {
    pub max_gap: f64,
    /// `(alpha, beta)` with the largest gap, reported when it exceeds the default tolerance.
    pub witness: Option<[f64; 2]>,
}

/// Largest Birkhoff-James gap of `(a, b) ⊥_B (b, -a)` in real `l_p^2` over
/// `samples` random `(a, b)`. Zero exactly for the Euclidean plane.
pub fn rotation_bj_deviation(p: f64, samples: usize, seed: u64) -> Result<RotationDeviation> {
    let space = PNormSpace::real(2, p)?;
    let mut rng = sampling::rng(seed);
    let mut best = (0.0_f64, None);
    for _ in 0..samples {
        let (a, b) = (sampling::gaussian(&mut rng), sampling::gaussian(&mut rng));
        let r = space.is_bj_orthogonal(&Vector::real(&[a, b]), &Vector::real(&[b, -a]), DEFAULT_TOL)?;
        if r.gap > best.0 || best.1.is_none() {
            best = (r.gap.max(best.0), if r.gap >= best.0 { Some([a, b]) } else { best.1 });
        }
    }
    let (max_gap, witness) = best;
    Ok(RotationDeviation { max_gap, witness: witness.filter(|_| max_gap > DEFAULT_TOL) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoDimReport {
    /// gap of `u ⊥_B v`
    pub u_perp_v: f64,
    /// gap of `v ⊥_B u`
    pub v_perp_u: f64,
    /// gap of `(u + v) ⊥_B (u - v)`
    pub diagonals: f64,
    /// largest relative violation of the rotated-norm identity
    pub norm_identity: f64,
    pub norm_identity_witness: Option<[f64; 3]>,
    /// largest disagreement between `⊥_T` and `⊥_B` on sampled pairs
    pub t_equals_b: f64,
    pub all_hold: bool,
}

/// Checks, for a two-dimensional real space, the conditions that together
/// characterize the Euclidean plane: mutual BJ orthogonality of `u` and `v`,
/// BJ orthogonality of their diagonals, the identity
/// `||(g + k d)u + (d - k g)v|| = ||(g - k d)u + (d + k g)v||` over random
/// `(g, d, k)`, and agreement of `⊥_T` with `⊥_B` on sampled pairs.
pub fn two_dim_hilbert_conditions(
    space: &PNormSpace,
    t: &PairingOperator,
    u: &Vector,
    v: &Vector,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<TwoDimReport> {
    if space.n() != 2 || t.n() != 2 {
        return Err(OrthoError::Unsupported("a two-dimensional space".into()));
    }
    if !space.field().is_real() || !t.field().is_real() {
        return Err(OrthoError::Unsupported("the real field".into()));
    }
    for (name, w) in [("u", u), ("v", v)] {
        let len = space.p_norm(w)?;
        if (len - 1.0).abs() > 1e-12 {
            return Err(OrthoError::Malformed(format!("{name} must be a unit vector, norm {len}")));
        }
    }

    let u_perp_v = space.is_bj_orthogonal(u, v, tol)?.gap;
    let v_perp_u = space.is_bj_orthogonal(v, u, tol)?.gap;
    let diagonals = space.is_bj_orthogonal(&(u + v), &(u - v), tol)?.gap;

    let mut rng = sampling::rng(seed);
    let mut norm_identity = 0.0_f64;
    let mut norm_identity_witness = None;
    for _ in 0..samples {
        let g = sampling::gaussian(&mut rng);
        let d = sampling::gaussian(&mut rng);
        let k = sampling::gaussian(&mut rng);
        let lhs = space.p_norm(&u.combine(Scalar::new(g + k * d, 0.0), v, Scalar::new(d - k * g, 0.0))?)?;
        let rhs = space.p_norm(&u.combine(Scalar::new(g - k * d, 0.0), v, Scalar::new(d + k * g, 0.0))?)?;
        let gap = (lhs - rhs).abs() / lhs.max(rhs).max(1.0);
        if gap > norm_identity {
            norm_identity = gap;
            norm_identity_witness = Some([g, d, k]);
        }
    }

    let mut t_equals_b = 0.0_f64;
    for _ in 0..samples {
        let x = sampling::vector(&mut rng, ScalarField::Real, 2);
        // ⊥_T ⊆ ⊥_B
        if let Ok(basis) = t.t_perp_basis(&x) {
            let y = sampling::combination(&mut rng, ScalarField::Real, &basis).expect("n = 2");
            t_equals_b = t_equals_b.max(space.is_bj_orthogonal(&x, &y, tol)?.gap);
        }
        // ⊥_B ⊆ ⊥_T, where BJ-orthogonal partners are available in closed form
        if space.has_unique_duality() {
            let f = space.support_functional(&x)?;
            let basis = functional_kernel(&f, 1.0)?;
            let y = sampling::combination(&mut rng, ScalarField::Real, &basis).expect("n = 2");
            t_equals_b = t_equals_b.max(t.is_t_orthogonal(&x, &y, tol)?.gap);
        }
    }

    let all_hold = [u_perp_v, v_perp_u, diagonals, norm_identity, t_equals_b]
        .iter()
        .all(|&g| g <= tol);
    Ok(TwoDimReport {
        u_perp_v,
        v_perp_u,
        diagonals,
        norm_identity,
        norm_identity_witness: norm_identity_witness.filter(|_| norm_identity > tol),
        t_equals_b,
        all_hold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    /// `e1 ⊥_B e2`, `e2 ⊥_B e1` and `(e1 + e2) ⊥_B (e1 - e2)` hold in the space
    pub bj_premises: bool,
    /// `M_12 = M_21 = 0`, forced by `e1 ⊥_T e2` and `e2 ⊥_T e1`
    pub diagonal: bool,
    /// `M_11 = M_22`, forced in addition by `(e1 + e2) ⊥_T (e1 - e2)`
    pub equal_diagonal: bool,
    /// `max(|M_12|, |M_21|) / ||M||_F`
    pub off_diagonal: f64,
    /// `|M_11 - M_22| / ||M||_F`
    pub diagonal_gap: f64,
}

/// If `⊥_T = ⊥_B` on `l_p^2`, the BJ relations among `e1`, `e2` and their
/// diagonals force `M` to be a multiple of the identity. Reports which of the
/// two deductions (diagonal, equal diagonal) `T` satisfies.
pub fn lp_pairing_structure_check(
    t: &PairingOperator,
    space: &PNormSpace,
    tol: f64,
) -> Result<StructureReport> {
    if t.n() != 2 || space.n() != 2 {
        return Err(OrthoError::Unsupported("a two-dimensional space".into()));
    }
    let e1 = Vector::basis(space.field(), 2, 0);
    let e2 = Vector::basis(space.field(), 2, 1);
    let bj_premises = space.is_bj_orthogonal(&e1, &e2, tol)?.verdict
        && space.is_bj_orthogonal(&e2, &e1, tol)?.verdict
        && space.is_bj_orthogonal(&(&e1 + &e2), &(&e1 - &e2), tol)?.verdict;
    let m = t.matrix();
    let scale = m.norm();
    let (off_diagonal, diagonal_gap) = if scale == 0.0 {
        (0.0, 0.0)
    } else {
        (
            m[(0, 1)].norm().max(m[(1, 0)].norm()) / scale,
            (m[(0, 0)] - m[(1, 1)]).norm() / scale,
        )
    };
    let diagonal = off_diagonal <= tol;
    Ok(StructureReport {
        bj_premises,
        diagonal,
        equal_diagonal: diagonal && diagonal_gap <= tol,
        off_diagonal,
        diagonal_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn rotation(t: f64) -> EndoOperator {
        EndoOperator::real_rows(2, &[t.cos(), -t.sin(), t.sin(), t.cos()]).unwrap()
    }

    fn dot() -> PairingOperator {
        PairingOperator::identity(ScalarField::Real, 2)
    }

    #[test]
    fn adjoint_conjugate_examples() {
        let t = fixtures::basic_c2_operator();
        let id = EndoOperator::new(ScalarField::Real, Matrix::identity(2, 2)).unwrap();
        assert_eq!(adjoint_conjugate(&t, &id).unwrap().matrix(), t.matrix());

        let r = adjoint_conjugate(&dot(), &rotation(0.7)).unwrap();
        assert!((r.matrix() - Matrix::identity(2, 2)).norm() < 1e-15);

        let d = EndoOperator::real_rows(2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let r = adjoint_conjugate(&dot(), &d).unwrap();
        assert_eq!(r.matrix()[(0, 0)], Scalar::new(4.0, 0.0));
        assert_eq!(r.matrix()[(1, 1)], ONE);
        assert_eq!(r.matrix()[(0, 1)], ZERO);
    }

    #[test]
    fn adjoint_conjugate_is_pullback() {
        let mut rng = sampling::rng(5);
        let t = PairingOperator::from_matrix(
            ScalarField::Complex,
            sampling::matrix(&mut rng, ScalarField::Complex, 3),
        )
        .unwrap();
        let a = EndoOperator::new(ScalarField::Complex, sampling::matrix(&mut rng, ScalarField::Complex, 3))
            .unwrap();
        let n = adjoint_conjugate(&t, &a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let ei = Vector::basis(ScalarField::Complex, 3, i);
                let ej = Vector::basis(ScalarField::Complex, 3, j);
                let lhs = n.pair(&ei, &ej).unwrap();
                let rhs = t.pair(&a.apply(&ei).unwrap(), &a.apply(&ej).unwrap()).unwrap();
                assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
            }
        }
    }

    #[test]
    fn isometry_examples() {
        let id = EndoOperator::new(ScalarField::Real, Matrix::identity(2, 2)).unwrap();
        assert!(is_t_isometry(&dot(), &id, DEFAULT_TOL).unwrap());
        assert!(is_t_isometry(&dot(), &rotation(1.3), DEFAULT_TOL).unwrap());
        let d = EndoOperator::real_rows(2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(!is_t_isometry(&dot(), &d, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn preserver_scalar_examples() {
        let twice = rotation(0.4).scaled(Scalar::new(2.0, 0.0));
        let beta = preserver_scalar(&dot(), &twice, DEFAULT_TOL).unwrap().unwrap();
        assert!((beta - Scalar::new(0.25, 0.0)).norm() < 1e-14);
        let id = EndoOperator::new(ScalarField::Real, Matrix::identity(2, 2)).unwrap();
        assert_eq!(preserver_scalar(&dot(), &id, DEFAULT_TOL).unwrap(), Some(ONE));
        let d = EndoOperator::real_rows(2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(preserver_scalar(&dot(), &d, DEFAULT_TOL).unwrap(), None);
        let zero = EndoOperator::real_rows(2, &[0.0; 4]).unwrap();
        assert_eq!(preserver_scalar(&dot(), &zero, DEFAULT_TOL).unwrap(), None);
    }

    #[test]
    fn sampled_preservation_examples() {
        assert!(preserves_t_orthogonality_sampled(&dot(), &rotation(2.2), 300, 1, DEFAULT_TOL)
            .unwrap()
            .holds);
        let d = EndoOperator::real_rows(2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let r = preserves_t_orthogonality_sampled(&dot(), &d, 300, 1, DEFAULT_TOL).unwrap();
        assert!(!r.holds);
        let c = r.counterexample.unwrap();
        // the reported pair really is a counterexample
        let before = dot().pair(&c.x, &c.y).unwrap().norm();
        let after = dot().pair(&d.apply(&c.x).unwrap(), &d.apply(&c.y).unwrap()).unwrap().norm();
        match c.failure {
            PreservationFailure::Forward => assert!(before < 1e-12 && after > 1e-6),
            PreservationFailure::Backward => assert!(after < 1e-12 && before > 1e-6),
        }
    }

    #[test]
    fn x_equals_diagonal_breaks_diag_2_1() {
        // x = (1,1), y = (1,-1): x ⊥ y but Ax = (2,1), Ay = (2,-1) pair to 3
        let d = EndoOperator::real_rows(2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let x = Vector::real(&[1.0, 1.0]);
        let y = Vector::real(&[1.0, -1.0]);
        assert_eq!(dot().pair(&x, &y).unwrap(), ZERO);
        assert_eq!(dot().pair(&d.apply(&x).unwrap(), &d.apply(&y).unwrap()).unwrap(), Scalar::new(3.0, 0.0));
    }

    #[test]
    fn constructed_isometries_preserve() {
        let mut rng = sampling::rng(11);
        let spd = sampling::spd_matrix(&mut rng, 3);
        let a = EndoOperator::from_real(&sampling::t_isometry_for_spd(&mut rng, &spd)).unwrap();
        let t = PairingOperator::from_matrix(ScalarField::Real, sampling::complexify(&spd)).unwrap();
        assert!(is_t_isometry(&t, &a, 1e-10).unwrap());
        assert!(preserves_t_orthogonality_sampled(&t, &a, 200, 2, DEFAULT_TOL).unwrap().holds);
        match classify_preserver(&t, &a, 200, 2, DEFAULT_TOL).unwrap() {
            PreserverClass::IsometryMultiple { beta } => assert!((beta - ONE).norm() < 1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singular_t_is_inconclusive() {
        let t = fixtures::nonbijective_l2_operator();
        let c = classify_preserver(&t, &rotation(0.2), 50, 1, DEFAULT_TOL).unwrap();
        assert!(matches!(c, PreserverClass::Inconclusive { .. }));
    }

    #[test]
    fn hilbert_fit_euclidean_plane() {
        let l2 = PNormSpace::real(2, 2.0).unwrap();
        let r = hilbert_fit(&l2, 200, 42).unwrap();
        assert!(r.residual <= 1e-8, "{}", r.residual);
        let m = r.m_fit.matrix();
        assert!((m.norm() - 1.0).abs() < 1e-12);
        // collinear with the identity
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m - Matrix::identity(2, 2) * Scalar::new(s, 0.0)).norm() < 1e-8);
        assert!(fit_reverse_gap(&l2, &r, 100, 1).unwrap() < 1e-8);
    }

    #[test]
    fn hilbert_fit_errors() {
        let l1 = PNormSpace::real(2, 1.0).unwrap();
        assert_eq!(hilbert_fit(&l1, 200, 1).unwrap_err(), OrthoError::NonSmoothExponent(1.0));
        let l2 = PNormSpace::real(3, 2.0).unwrap();
        assert_eq!(
            hilbert_fit(&l2, 5, 1).unwrap_err(),
            OrthoError::TooFewSamples { needed: 9, got: 5 }
        );
        assert!(hilbert_fit(&PNormSpace::real(1, 2.0).unwrap(), 10, 1).is_err());
    }

    #[test]
    fn fit_report_json() {
        let r = hilbert_fit(&PNormSpace::real(2, 2.0).unwrap(), 8, 42).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["p"], 2.0);
        assert_eq!(v["samples"], 8);
        assert_eq!(v["seed"], 42);
        assert!(v["residual"].is_number());
        assert_eq!(v["m_fit"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn rotation_deviation_p2_vanishes() {
        let r = rotation_bj_deviation(2.0, 300, 9).unwrap();
        assert!(r.max_gap <= 1e-10, "{}", r.max_gap);
        assert_eq!(r.witness, None);
    }

    #[test]
    fn rotation_deviation_l3_point() {
        let l3 = PNormSpace::real(2, 3.0).unwrap();
        let gap = l3
            .is_bj_orthogonal(&Vector::real(&[1.0, 2.0]), &Vector::real(&[2.0, -1.0]), DEFAULT_TOL)
            .unwrap()
            .gap;
        assert!(gap > 1e-3);
        let r = rotation_bj_deviation(3.0, 200, 42).unwrap();
        assert!(r.max_gap > 1e-3);
        assert!(r.witness.is_some());
    }

    #[test]
    fn two_dim_conditions_euclidean() {
        let l2 = PNormSpace::real(2, 2.0).unwrap();
        let e1 = Vector::real(&[1.0, 0.0]);
        let e2 = Vector::real(&[0.0, 1.0]);
        let r = two_dim_hilbert_conditions(&l2, &dot(), &e1, &e2, 300, 3, 1e-10).unwrap();
        assert!(r.all_hold, "{r:?}");
        for g in [r.u_perp_v, r.v_perp_u, r.diagonals, r.norm_identity, r.t_equals_b] {
            assert!(g <= 1e-10);
        }
    }

    #[test]
    fn two_dim_conditions_l4_identity_fails() {
        let l4 = PNormSpace::real(2, 4.0).unwrap();
        let e1 = Vector::real(&[1.0, 0.0]);
        let e2 = Vector::real(&[0.0, 1.0]);
        let r = two_dim_hilbert_conditions(&l4, &dot(), &e1, &e2, 300, 3, 1e-8).unwrap();
        assert!(r.u_perp_v <= 1e-8 && r.v_perp_u <= 1e-8 && r.diagonals <= 1e-8);
        assert!(r.norm_identity > 1e-3);
        let [g, d, k] = r.norm_identity_witness.unwrap();
        let lhs = ((g + k * d).abs().powi(4) + (d - k * g).abs().powi(4)).powf(0.25);
        let rhs = ((g - k * d).abs().powi(4) + (d + k * g).abs().powi(4)).powf(0.25);
        assert!((lhs - rhs).abs() > 1e-6);
        assert!(!r.all_hold);
    }

    #[test]
    fn norm_identity_trivial_at_zero_rotation() {
        // k = 0: both sides are ||g u + d v||
        let l4 = PNormSpace::real(2, 4.0).unwrap();
        let u = Vector::real(&[1.0, 0.0]);
        let v = Vector::real(&[0.0, 1.0]);
        for (g, d) in [(0.3, -2.0), (1.0, 1.0), (5.0, 0.1)] {
            let a = l4.p_norm(&u.combine(Scalar::new(g, 0.0), &v, Scalar::new(d, 0.0)).unwrap()).unwrap();
            let b = l4.p_norm(&u.combine(Scalar::new(g, 0.0), &v, Scalar::new(d, 0.0)).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn two_dim_conditions_validate_inputs() {
        let l2 = PNormSpace::real(2, 2.0).unwrap();
        let r = two_dim_hilbert_conditions(
            &l2,
            &dot(),
            &Vector::real(&[2.0, 0.0]),
            &Vector::real(&[0.0, 1.0]),
            10,
            1,
            1e-8,
        );
        assert!(r.is_err());
        let c2 = PNormSpace::complex(2, 2.0).unwrap();
        let e = Vector::complex(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(two_dim_hilbert_conditions(&c2, &dot(), &e, &e, 10, 1, 1e-8).is_err());
    }

    #[test]
    fn structure_check_examples() {
        let l3 = PNormSpace::real(2, 3.0).unwrap();
        let scaled = PairingOperator::real_rows(2, &[2.5, 0.0, 0.0, 2.5]).unwrap();
        let r = lp_pairing_structure_check(&scaled, &l3, DEFAULT_TOL).unwrap();
        assert!(r.bj_premises && r.diagonal && r.equal_diagonal);

        let d = PairingOperator::real_rows(2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        let r = lp_pairing_structure_check(&d, &l3, DEFAULT_TOL).unwrap();
        assert!(r.diagonal && !r.equal_diagonal);

        let c2 = PNormSpace::complex(2, 2.0).unwrap();
        let r = lp_pairing_structure_check(&fixtures::basic_c2_operator(), &c2, DEFAULT_TOL).unwrap();
        assert!(!r.diagonal);
    }

    #[test]
    fn endo_json_roundtrip() {
        let a = rotation(0.3);
        let json = serde_json::to_string(&a).unwrap();
        let back: EndoOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
        assert!(serde_json::from_str::<EndoOperator>(r#"{"n":2,"field":"real","columns":[[1,0]]}"#).is_err());
    }
}
