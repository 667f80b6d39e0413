//! Left and right symmetry points of `⊥_T`.

use banach_ortho::fixtures::{lemma_counterexample_operator, nonbijective_l2_operator};
use banach_ortho::symmetry::{find_nonisotropic, is_operator_symmetric, symmetry_at, symmetry_scalar};
use banach_ortho::{PairingOperator, Result, Vector, DEFAULT_TOL};

fn report(name: &str, t: &PairingOperator, x: &Vector) -> Result<()> {
    let v = symmetry_at(t, x, DEFAULT_TOL)?;
    println!(
        "{name} at {}: left {}, right {}, lambda {:?}\n  {}",
        serde_json::to_string(x).unwrap(),
        v.left,
        v.right,
        v.scalar,
        v.certificate
    );
    Ok(())
}

fn main() -> Result<()> {
    let rank_one = nonbijective_l2_operator();
    report("rank one", &rank_one, &Vector::real(&[1.0, 1.0]))?;
    report("rank one", &rank_one, &Vector::real(&[1.0, 0.0]))?;

    let t = lemma_counterexample_operator();
    report("lemma", &t, &Vector::real(&[1.0, 0.0]))?;
    report("lemma", &t, &Vector::real(&[1.0, 1.0]))?;

    // a symmetric form is symmetric everywhere, with lambda = 1
    let s = PairingOperator::real_rows(3, &[2.0, 1.0, 0.0, 1.0, 3.0, -1.0, 0.0, -1.0, 1.0])?;
    println!("symmetric matrix: {}", is_operator_symmetric(&s, DEFAULT_TOL));
    let x = find_nonisotropic(&s).expect("S has a nonzero quadratic form");
    report("symmetric", &s, &x)?;
    println!("symmetry scalar at the nonisotropic point: {}", symmetry_scalar(&s, &x)?);
    Ok(())
}
