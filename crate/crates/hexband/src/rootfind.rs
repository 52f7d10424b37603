//! Bracketed root and extremum refinement used by the band scanners.
//!
//! Everything here is derivative-free: the discriminant develops tangential
//! contacts with ±1 at band touchings, where Newton steps blow up but
//! bisection and bracketed minimization stay reliable.

/// Bisection to floating-point exhaustion: stops when the midpoint no longer
/// lies strictly between the bracket endpoints. `flo` must be `f(lo)` with
/// `sign(f(lo)) ≠ sign(f(hi))` (one of them may be zero).
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if (fmid > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Bracketed extremum refinement: golden-section search followed by a few
/// three-point parabolic vertex fits with shrinking sampling width. The fits
/// recover the extremum location to ~1e-9 even where the function is locally
/// quadratic and the golden phase alone is limited to ~√ε accuracy.
///
/// Returns `(x, f(x))` of the refined extremum; `maximize` selects the sense.
pub fn refine_extremum<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    maximize: bool,
) -> (f64, f64) {
    let sign = if maximize { -1.0 } else { 1.0 };
    let g = |x: f64| sign * f(x);

    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    let width_goal = 1e-6 * (1.0 + lo.abs().max(hi.abs()));
    while hi - lo > width_goal {
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            g2 = g(x2);
        }
    }

    let mut x = if g1 <= g2 { x1 } else { x2 };
    let scale = 1.0 + x.abs();
    for h in [1e-3 * scale, 1e-5 * scale, 1e-6 * scale] {
        let (fm, f0, fp) = (g(x - h), g(x), g(x + h));
        let denom = fp - 2.0 * f0 + fm;
        if denom > 0.0 {
            let step = -0.5 * h * (fp - fm) / denom;
            if step.is_finite() && step.abs() <= h {
                x += step;
            }
        }
    }
    (x, f(x))
}
