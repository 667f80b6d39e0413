//! Derivative-free minimization of convex functions of one or two real variables.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a convex `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `width_tol`. Returns the best point
/// evaluated together with its value; the endpoints are evaluated too, so a
/// minimum sitting on the boundary is not lost.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, width_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut best = (a, f(a));
    let fb = f(b);
    if fb < best.1 {
        best = (b, fb);
    }
    if b - a <= width_tol {
        return best;
    }

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // bounded: each step shrinks the bracket by 1/phi
    for _ in 0..400 {
        if b - a <= width_tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (t, ft) in [(c, fc), (d, fd)] {
        if ft < best.1 {
            best = (t, ft);
        }
    }
    best
}

/// Minimizes a convex `f` over the closed disk `|(u, v)| <= radius` in the plane.
///
/// Nested golden-section search: the outer search runs over `u`, the inner one
/// over the vertical chord of the disk at `u`. Minimizing a convex function
/// over one coordinate leaves a convex function of the other, so both levels
/// search convex functions and kinks (as in `l_1` or `l_inf`) cannot stall it.
pub fn minimize_disk<F>(mut f: F, radius: f64, width_tol: f64) -> ((f64, f64), f64)
where
    F: FnMut(f64, f64) -> f64,
{
    let origin = ((0.0, 0.0), f(0.0, 0.0));
    if radius <= 0.0 {
        return origin;
    }
    let mut best = origin;
    let mut inner = |u: f64| {
        let half = (radius * radius - u * u).max(0.0).sqrt();
        let (v, fv) = golden_section(|v| f(u, v), -half, half, width_tol);
        if fv < best.1 {
            best = ((u, v), fv);
        }
        fv
    };
    golden_section(&mut inner, -radius, radius, width_tol);
    best
}
