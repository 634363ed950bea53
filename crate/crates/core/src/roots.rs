//! Safeguarded one-dimensional root finding.
//!
//! Brent's method (inverse quadratic interpolation with bisection fallback)
//! on a bracketing interval, plus a helper that widens a bracket geometrically
//! until the function changes sign.

use crate::error::{CreditError, Result};

const MAX_ITER: usize = 200;

/// Finds `x` in `[lo, hi]` with `f(x) = 0`. `f(lo)` and `f(hi)` must differ in sign.
///
/// Terminates when the bracket is narrower than `x_tol` or `|f| <= f_tol`.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, x_tol: f64, f_tol: f64, what: &str) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !fa.is_finite() || !fb.is_finite() {
        return Err(CreditError::NoBracket { what: what.to_string(), lo, hi });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(CreditError::NoBracket { what: what.to_string(), lo, hi });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() <= f_tol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)), (q - 1.0) * (r - 1.0) * (s - 1.0))
            };
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
        if !fb.is_finite() {
            return Err(CreditError::NoConvergence { what: what.to_string(), iterations: MAX_ITER });
        }
    }
    Err(CreditError::NoConvergence { what: what.to_string(), iterations: MAX_ITER })
}

/// Expands `[lo, hi]` upwards (multiplying `hi` by `factor`) until `f` changes sign,
/// never exceeding `cap`. Returns the bracketing interval.
pub fn expand_upper<F>(mut f: F, lo: f64, mut hi: f64, factor: f64, cap: f64, what: &str) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    let mut prev = lo;
    loop {
        let f_hi = f(hi);
        if f_lo.is_finite() && f_hi.is_finite() && f_lo.signum() != f_hi.signum() {
            return Ok((prev, hi));
        }
        if hi >= cap {
            return Err(CreditError::NoBracket { what: what.to_string(), lo, hi });
        }
        prev = hi;
        hi = (hi * factor).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let x = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-15, 0.0, "cbrt").unwrap();
        assert!((x - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_same_sign() {
        let err = brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 0.0, "q").unwrap_err();
        assert!(matches!(err, CreditError::NoBracket { .. }));
    }

    #[test]
    fn expansion_finds_far_root() {
        let (lo, hi) = expand_upper(|x| x - 37.0, 0.0, 1.0, 2.0, 1e3, "far").unwrap();
        assert!(lo <= 37.0 && 37.0 <= hi);
        assert!(expand_upper(|x| x + 1.0, 0.0, 1.0, 2.0, 10.0, "none").is_err());
    }
}
