//! Scalar root finding and minimization on brackets.

/// Bisection on a sign-changing bracket, run until the bracket cannot be
/// split further in floating point or `rel_tol` is reached.
///
/// Returns the endpoint with the smaller `|f|` and the iteration count.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> (f64, usize)
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    let mut iterations = 0;
    if f_lo == 0.0 {
        return (lo, 0);
    }
    if f_hi == 0.0 {
        return (hi, 0);
    }
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * mid.abs() {
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return (mid, iterations);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        (lo, iterations)
    } else {
        (hi, iterations)
    }
}

/// Brent's method (inverse quadratic interpolation, secant and bisection).
/// `f(a)` and `f(b)` must differ in sign.
pub fn brent<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_iter: usize) -> Option<(f64, usize)>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some((a, 0));
    }
    if fb == 0.0 {
        return Some((b, 0));
    }
    if (fa < 0.0) == (fb < 0.0) {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if (fb < 0.0) == (fc < 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs();
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some((b, iter));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    None
}

/// Golden-section search for a minimum of a unimodal function on `[lo, hi]`.
///
/// Returns `(x_min, f(x_min), iterations, converged)`.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> (f64, f64, usize, bool)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < 300 {
        if (b - a) <= rel_tol * 0.5 * (a.abs() + b.abs()) {
            converged = true;
            break;
        }
        iterations += 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1, iterations, converged)
    } else {
        (x2, f2, iterations, converged)
    }
}
