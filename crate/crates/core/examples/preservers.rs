//! T-isometries and maps that preserve `⊥_T`.

use std::f64::consts::FRAC_PI_3;

use banach_ortho::preserve::{
    adjoint_conjugate, classify_preserver, is_t_isometry, preserver_scalar, EndoOperator,
};
use banach_ortho::{PairingOperator, Result, DEFAULT_TOL};

fn main() -> Result<()> {
    // a Minkowski-type form diag(1, -1) and a hyperbolic rotation
    let t = PairingOperator::real_rows(2, &[1.0, 0.0, 0.0, -1.0])?;
    let (c, s) = (1.25_f64.cosh(), 1.25_f64.sinh());
    let boost = EndoOperator::real_rows(2, &[c, s, s, c])?;
    println!("boost is a T-isometry: {}", is_t_isometry(&t, &boost, DEFAULT_TOL)?);

    let scaled = boost.scaled(banach_ortho::Scalar::new(3.0, 0.0));
    println!("3 * boost: isometry {}, beta {:?}", is_t_isometry(&t, &scaled, DEFAULT_TOL)?, preserver_scalar(&t, &scaled, DEFAULT_TOL)?);

    let rotation = EndoOperator::real_rows(2, &[FRAC_PI_3.cos(), -FRAC_PI_3.sin(), FRAC_PI_3.sin(), FRAC_PI_3.cos()])?;
    println!("A^T M A for a Euclidean rotation: {}", serde_json::to_string(&adjoint_conjugate(&t, &rotation)?).unwrap());

    for (name, a) in [("3 * boost", &scaled), ("rotation", &rotation)] {
        let class = classify_preserver(&t, a, 200, 42, DEFAULT_TOL)?;
        println!("{name}: {}", serde_json::to_string(&class).unwrap());
    }
    Ok(())
}
