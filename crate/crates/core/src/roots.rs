//! Scalar root finding and one-dimensional optimisation.

use crate::error::{Error, Result};

/// A root together with the final enclosing bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracketed {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the bracket
/// is narrower than `tol`. Returns the midpoint of the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Bracketed> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(Bracketed { root: lo, lo, hi: lo, iterations: 0 });
    }
    if fhi == 0.0 {
        return Ok(Bracketed { root: hi, lo: hi, hi, iterations: 0 });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!(
            "no sign change on [{lo}, {hi}]: f = {flo:e}, {fhi:e}"
        )));
    }
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(Bracketed { root: 0.5 * (lo + hi), lo, hi, iterations: it - 1 });
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(Bracketed { root: mid, lo: mid, hi: mid, iterations: it });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= tol {
        Ok(Bracketed { root: 0.5 * (lo + hi), lo, hi, iterations: max_iter })
    } else {
        Err(Error::Convergence { iterations: max_iter, lo, hi })
    }
}

/// Newton's method kept inside a sign-change bracket: any step that leaves
/// the bracket, or fails to halve it quickly enough, is replaced by
/// bisection. `fdf` returns the value and derivative.
pub fn safeguarded_newton<F: FnMut(f64) -> (f64, f64)>(
    mut fdf: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Bracketed> {
    let (flo, _) = fdf(lo);
    let (fhi, _) = fdf(hi);
    if flo == 0.0 {
        return Ok(Bracketed { root: lo, lo, hi: lo, iterations: 0 });
    }
    if fhi == 0.0 {
        return Ok(Bracketed { root: hi, lo: hi, hi, iterations: 0 });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!(
            "no sign change on [{lo}, {hi}]: f = {flo:e}, {fhi:e}"
        )));
    }
    let lo_sign = flo.signum();
    let mut x = 0.5 * (lo + hi);
    let mut last_step = hi - lo;
    for it in 1..=max_iter {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 {
            return Ok(Bracketed { root: x, lo: x, hi: x, iterations: it });
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(Bracketed { root: mid, lo, hi, iterations: it });
        }
        let newton = x - fx / dfx;
        let step_ok = dfx.is_finite()
            && dfx != 0.0
            && newton > lo
            && newton < hi
            && (newton - x).abs() < 0.5 * last_step;
        let next = if step_ok { newton } else { mid };
        last_step = (next - x).abs();
        if last_step <= 0.25 * tol {
            // Converged in the Newton sense; tighten the bracket around it.
            return Ok(Bracketed { root: next, lo: lo.max(next - tol), hi: hi.min(next + tol), iterations: it });
        }
        x = next;
    }
    Err(Error::Convergence { iterations: max_iter, lo, hi })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`. Returns the best
/// point seen and its value. `f` need not be unimodal; the result is then a
/// local maximum of the sampled points.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut best_x, mut best_f) = if fc >= fd { (c, fc) } else { (d, fd) };
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc > best_f {
                best_x = c;
                best_f = fc;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best_f {
                best_x = d;
                best_f = fd;
            }
        }
    }
    (best_x, best_f)
}

/// Golden-section search for a minimum; see [`golden_max`].
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|x| -f(x), a, b, tol);
    (x, -v)
}
