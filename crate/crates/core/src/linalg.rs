//! Small dense linear-algebra helpers over `Complex64`.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{Scalar, ZERO};

pub type Matrix = DMatrix<Scalar>;

/// Operator 2-norm estimate by 20 rounds of power iteration on `M^H M`.
///
/// The estimate is clamped below by `||M||_F / sqrt(n)`, itself a lower bound
/// of the 2-norm, so an unlucky start vector cannot report zero for `M != 0`.
pub fn operator_norm(m: &Matrix) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let mut v = DVector::from_fn(n, |i, _| Scalar::new(1.0 / (i as f64 + 1.0), 0.0));
    let mut estimate = 0.0;
    for _ in 0..20 {
        let w = &gram * &v;
        let len = w.norm();
        if len == 0.0 {
            break;
        }
        estimate = len.sqrt() * (1.0 / v.norm()).sqrt();
        v = w / Scalar::new(len, 0.0);
    }
    let floor = m.norm() / (m.nrows().max(1) as f64).sqrt();
    estimate.max(floor).max(0.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub fn rank(m: &Matrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * top).count()
}

/// Smallest singular value of a tall matrix and a unit right singular vector for it.
pub fn smallest_right_singular(m: &Matrix) -> (f64, DVector<Scalar>) {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let (k, sigma) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty matrix");
    let v = vt.row(k).adjoint();
    (sigma, v)
}

/// Hermitian projection coefficient of `v` onto `u` and the residual norm
/// `||v - c u||`. With `u = 0` the coefficient is zero and the residual is `||v||`.
pub fn project(v: &DVector<Scalar>, u: &DVector<Scalar>) -> (Scalar, f64) {
    let uu = u.norm_squared();
    if uu == 0.0 {
        return (ZERO, v.norm());
    }
    let c = u.dotc(v) / Scalar::new(uu, 0.0);
    let residual = (v - u * c).norm();
    (c, residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, data: &[f64]) -> Matrix {
        DMatrix::from_row_slice(rows, cols, data).map(|r| Scalar::new(r, 0.0))
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let m = real(2, 2, &[3.0, 0.0, 0.0, -5.0]);
        assert!((operator_norm(&m) - 5.0).abs() < 1e-6);
    }

    #[test]
    fn operator_norm_bad_start_vector() {
        // the start direction (1, 1/2) spans the kernel
        let m = real(2, 2, &[1.0, -2.0, 1.0, -2.0]);
        let est = operator_norm(&m);
        assert!(est >= m.norm() / 2f64.sqrt() - 1e-12);
        assert!(est <= m.norm() + 1e-12);
    }

    #[test]
    fn rank_of_singular_matrix() {
        assert_eq!(rank(&real(2, 2, &[1.0, 2.0, -1.0, -2.0]), 1e-10), 1);
        assert_eq!(rank(&real(2, 2, &[1.0, 0.0, 0.0, 1.0]), 1e-10), 2);
        assert_eq!(rank(&real(2, 2, &[0.0; 4]), 1e-10), 0);
    }

    #[test]
    fn projection_residual() {
        let u = DVector::from_vec(vec![Scalar::new(0.0, 1.0), ZERO]);
        let v = DVector::from_vec(vec![Scalar::new(2.0, 0.0), ZERO]);
        let (c, r) = project(&v, &u);
        assert!(r < 1e-15);
        assert!((u * c - v).norm() < 1e-15);
    }

    #[test]
    fn null_vector_found() {
        let m = real(3, 2, &[1.0, 1.0, 2.0, 2.0, -1.0, -1.0]);
        let (s, v) = smallest_right_singular(&m);
        assert!(s < 1e-12);
        assert!((&m * &v).norm() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }
}
