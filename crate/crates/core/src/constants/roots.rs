//! Bracketed bisection followed by a safeguarded Newton polish.

use crate::error::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
const BISECT_WIDTH: f64 = 1e-6;
/// Newton stops once the step is below this (absolute).
const POLISH_TOL: f64 = 1e-14;
const MAX_NEWTON: usize = 100;

/// Root of `f` in `[lo, hi]`, where `f(lo)` and `f(hi)` have opposite signs
/// (or one of them is zero). `df` is the derivative of `f`.
pub(crate) fn solve_bracketed<F, D>(op: &'static str, f: F, df: D, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::domain(
            op,
            format!("no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})"),
        ));
    }
    while hi - lo > BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let fx = f(x);
        if fx == 0.0 {
            break;
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        // Fall back to bisection when Newton leaves the bracket.
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step < POLISH_TOL {
            break;
        }
    }
    Ok(x)
}
