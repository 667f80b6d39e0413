//! Support functionals and the metric orthogonalities of `l_p^n`.

use banach_ortho::{PNormSpace, Result, Vector, DEFAULT_TOL};

fn main() -> Result<()> {
    let x = Vector::real(&[1.0, 2.0]);
    for p in [1.5, 2.0, 3.0, 4.0] {
        let space = PNormSpace::real(2, p)?;
        let f = space.support_functional(&x)?;
        println!(
            "p = {p}: J(x) = {}, f(x) = {:.6}, ||x|| = {:.6}, ||f||* = {:.6}",
            serde_json::to_string(&f).unwrap(),
            f.apply(&x)?.re,
            space.p_norm(&x)?,
            space.dual_norm(&f)?,
        );

        // the rotated vector is BJ orthogonal to x only for p = 2
        let y = Vector::real(&[2.0, -1.0]);
        let bj = space.is_bj_orthogonal(&x, &y, DEFAULT_TOL)?;
        let iso = space.is_isosceles_orthogonal(&x, &y, DEFAULT_TOL)?;
        println!("  x ⊥_B (2,-1): {} (gap {:.2e}), isosceles: {}", bj.verdict, bj.gap, iso.verdict);

        let (t, m) = space.bj_minimize(&x, &y)?;
        println!("  min_t ||x + t y|| = {m:.6} at t = {:.6}", t.re);
    }

    // kinks: in l_1 and l_inf the support functional is not unique
    let l1 = PNormSpace::real(2, 1.0)?;
    println!("l_1 support functional: {:?}", l1.support_functional(&x).err());
    let bj = l1.is_bj_orthogonal(&Vector::real(&[1.0, 0.0]), &Vector::real(&[0.5, 1.0]), DEFAULT_TOL)?;
    println!("l_1: (1,0) ⊥_B (0.5,1): {}", bj.verdict);
    Ok(())
}
