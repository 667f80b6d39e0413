//! Deciding `x ⊥_T y` and its directional variant for a complex pairing.
//!
//! Run with `cargo run --example t_orthogonality`.

use banach_ortho::fixtures::basic_c2_operator;
use banach_ortho::{Result, ThetaDirection, Vector, DEFAULT_TOL};

fn main() -> Result<()> {
    // T(1,0) = 7i e1* + e2*,  T(0,1) = 2 e1* + 3i e2*
    let t = basic_c2_operator();
    let x = Vector::complex(&[(1.0, 0.0), (0.0, 0.0)]);
    let y = Vector::complex(&[(0.0, 0.0), (1.0, 0.0)]);

    let value = t.pair(&x, &y)?;
    let r = t.is_t_orthogonal(&x, &y, DEFAULT_TOL)?;
    println!("(Tx, y) = {value}, x ⊥_T y: {}", r.verdict);

    // every pair is orthogonal in exactly one direction modulo pi
    let sol = t.theta_direction(&x, &y)?;
    let theta = sol.theta;
    let r = t.is_t_theta_orthogonal(theta, &x, &y, DEFAULT_TOL)?;
    println!("theta = {:.6}: orthogonal {}", theta.radians(), r.verdict);

    let shifted = ThetaDirection::new(theta.radians() + std::f64::consts::PI);
    println!("theta + pi: orthogonal {}", t.is_t_theta_orthogonal(shifted, &x, &y, DEFAULT_TOL)?.verdict);

    for k in 0..4 {
        let dir = ThetaDirection::new(k as f64 * std::f64::consts::FRAC_PI_2);
        let class = t.sign_class(dir, &x, &y, DEFAULT_TOL)?;
        println!("theta = {:.4}: y lies in the {class:?} half-space of x", dir.radians());
    }

    // the hyperplane x^{⊥_T}
    for b in t.t_perp_basis(&x)? {
        println!("basis of ker Tx: {}", serde_json::to_string(&b).unwrap());
    }
    Ok(())
}
