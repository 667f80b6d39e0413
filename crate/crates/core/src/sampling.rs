//! Seeded random instances: vectors, operators, and structured families
//! (symmetric, antisymmetric, SPD, T-isometries) used by the property suites.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::Matrix;
use crate::scalar::{Scalar, ScalarField};
use crate::space::Vector;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: ScalarField) -> Scalar {
    match field {
        ScalarField::Real => Scalar::new(gaussian(rng), 0.0),
        ScalarField::Complex => Scalar::new(gaussian(rng), gaussian(rng)),
    }
}

/// Unit-modulus scalar of the field: `+-1` over the reals, `e^{it}` over the complex numbers.
pub fn phase<R: Rng + ?Sized>(rng: &mut R, field: ScalarField) -> Scalar {
    match field {
        ScalarField::Real => Scalar::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0),
        ScalarField::Complex => Scalar::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
    }
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> Vector {
    let entries = (0..n).map(|_| scalar(rng, field)).collect();
    Vector::new(field, entries).expect("gaussian entries are finite")
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> Matrix {
    DMatrix::from_fn(n, n, |_, _| scalar(rng, field))
}

/// `(G + G^T) / 2`: symmetric in the bilinear sense, no conjugation.
pub fn symmetric_matrix<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> Matrix {
    let g = matrix(rng, field, n);
    (&g + g.transpose()) * Scalar::new(0.5, 0.0)
}

pub fn antisymmetric_matrix<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> Matrix {
    let g = matrix(rng, field, n);
    (&g - g.transpose()) * Scalar::new(0.5, 0.0)
}

/// Real orthogonal matrix from the QR factors of a Gaussian matrix, with the
/// signs of `R`'s diagonal folded into `Q` so the distribution is Haar.
pub fn orthogonal_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Real symmetric positive definite matrix `G^T G + n I`.
pub fn spd_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    g.transpose() * &g + DMatrix::identity(n, n) * n as f64
}

/// For SPD `M = R^T R` (Cholesky) and orthogonal `Q`, `A = R^{-1} Q R` satisfies
/// `A^T M A = M`.
pub fn t_isometry_for_spd<R: Rng + ?Sized>(rng: &mut R, spd: &DMatrix<f64>) -> DMatrix<f64> {
    let n = spd.nrows();
    let chol = spd.clone().cholesky().expect("positive definite input");
    // nalgebra returns lower L with M = L L^T, so R = L^T
    let r = chol.l().transpose();
    let r_inv = r.clone().try_inverse().expect("triangular factor is invertible");
    let q = orthogonal_matrix(rng, n);
    r_inv * q * r
}

pub fn complexify(m: &DMatrix<f64>) -> Matrix {
    m.map(|r| Scalar::new(r, 0.0))
}

/// `c_1 b_1 + ... + c_k b_k` with Gaussian coefficients; `None` for an empty basis.
pub fn combination<R: Rng + ?Sized>(
    rng: &mut R,
    field: ScalarField,
    basis: &[Vector],
) -> Option<Vector> {
    let (first, rest) = basis.split_first()?;
    let mut acc = first.scaled(scalar(rng, field));
    for b in rest {
        acc = acc.combine(crate::scalar::ONE, b, scalar(rng, field)).expect("same dimension");
    }
    Some(acc)
}

/// A pairing with a prescribed symmetry scalar at a point: returns `(M, x)`
/// with `Mx = lambda M^T x`, so `⊥_T` is left and right symmetric at `x`.
///
/// For `lambda != 1` such an `x` is necessarily isotropic; the construction
/// enforces that by taking `w = M^T x` bilinearly orthogonal to `x`. The part of
/// `M` acting on the complement of `x` is random.
pub fn symmetric_point<R: Rng + ?Sized>(
    rng: &mut R,
    field: ScalarField,
    n: usize,
    lambda: Scalar,
) -> (Matrix, Vector) {
    loop {
        let x = vector(rng, field, n);
        let xv = x.entries().clone();
        let c = xv.dot(&xv);
        if c.norm() < 1e-3 * xv.norm_squared() {
            continue;
        }
        let mut w = vector(rng, field, n).entries().clone();
        if lambda != crate::scalar::ONE {
            let k = xv.dot(&w) / c;
            w -= &xv * k;
        }
        let xt = xv.transpose();
        let p = Matrix::identity(n, n) - &xv * &xt / c;
        let rest = &p * matrix(rng, field, n) * &p;
        let m = if lambda == crate::scalar::ONE {
            let k = xt.dot(&w.transpose()) / (c * c);
            (&w * &xt + &xv * w.transpose()) / c - &xv * &xt * k + rest
        } else {
            (&w * &xt * lambda + &xv * w.transpose()) / c + rest
        };
        return (m, x);
    }
}

/// A nonzero `z` with `z^T M z = 0`, found on the line `u + t w` through two
/// random vectors. Over the reals the quadratic form may be definite, in which
/// case `None` is returned after a few attempts.
pub fn isotropic_vector<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, m: &Matrix) -> Option<Vector> {
    let n = m.nrows();
    let q = |a: &Vector, b: &Vector| (a.entries().transpose() * m * b.entries())[(0, 0)];
    for _ in 0..8 {
        let u = vector(rng, field, n);
        let w = vector(rng, field, n);
        let (a, b, c) = (q(&w, &w), q(&u, &w) + q(&w, &u), q(&u, &u));
        let scale = m.norm() * u.euclidean_norm() * w.euclidean_norm();
        if a.norm() <= 1e-12 * scale {
            continue;
        }
        let disc = b * b - a * c * 4.0;
        let root = match field {
            ScalarField::Real if disc.re < 0.0 => continue,
            ScalarField::Real => Scalar::new(disc.re.sqrt(), 0.0),
            ScalarField::Complex => disc.sqrt(),
        };
        let t = (-b + root) / (a * 2.0);
        let z = u.combine(crate::scalar::ONE, &w, t).expect("same dimension");
        if !z.is_zero() {
            return Some(z);
        }
    }
    None
}
