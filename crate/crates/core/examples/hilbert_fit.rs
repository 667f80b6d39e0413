//! How far `l_p^n` is from carrying a pairing whose orthogonality is Birkhoff-James.
//!
//! The residual vanishes only at `p = 2`.

use banach_ortho::preserve::{hilbert_fit, rotation_bj_deviation};
use banach_ortho::{PNormSpace, Result};

fn main() -> Result<()> {
    for p in [1.5, 2.0, 3.0, 6.0] {
        let space = PNormSpace::real(3, p)?;
        let fit = hilbert_fit(&space, 200, 42)?;
        println!("p = {p}: residual {:.3e}", fit.residual);
    }
    let fit = hilbert_fit(&PNormSpace::real(2, 2.0)?, 50, 42)?;
    println!("fitted pairing on l_2^2: {}", serde_json::to_string(&fit.m_fit).unwrap());

    for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let dev = rotation_bj_deviation(p, 500, 42)?;
        println!("(a,b) ⊥_B (b,-a) in l_{p}^2: worst gap {:.3e} at {:?}", dev.max_gap, dev.witness);
    }
    Ok(())
}
