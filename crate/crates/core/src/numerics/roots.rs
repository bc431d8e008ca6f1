use super::Tolerance;
use crate::error::{Error, Result};

/// Brent's method: bisection safeguarded inverse quadratic / secant steps.
///
/// The returned point always lies inside `[lo, hi]`. Iteration stops when
/// `|f(r)| <= abs_tol` or the bracket has shrunk below `rel_tol * |r|`
/// (floored at machine resolution of the initial bracket).
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64> {
    tol.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidInput(format!("invalid bracket [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Numerical("function is NaN at bracket end".into()));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let floor = f64::EPSILON * lo.abs().max(hi.abs());
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
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
        let tol1 = (2.0 * f64::EPSILON * b.abs() + 0.5 * tol.rel_tol * b.abs()).max(floor);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 || fb.abs() <= tol.abs_tol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        b = b.clamp(lo, hi);
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Numerical(format!("function is NaN at {b}")));
        }
    }
    Err(Error::Convergence {
        estimate: b,
        error_bound: (c - b).abs(),
        iterations: tol.max_iter,
    })
}

/// Smallest point of `[lo, hi]` where a monotone predicate turns true,
/// located by plain bisection to within `width`.
///
/// Requires `pred(hi)`; returns `lo` when `pred(lo)` already holds.
pub fn bisect_predicate<P: Fn(f64) -> bool>(pred: P, lo: f64, hi: f64, width: f64) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::InvalidInput(format!("invalid bracket [{lo}, {hi}]")));
    }
    if pred(lo) {
        return Ok(lo);
    }
    if !pred(hi) {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: 0.0,
            f_hi: 0.0,
        });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > width {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if pred(m) {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(b)
}
