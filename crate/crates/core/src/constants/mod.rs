//! Limit constants as roots of the rate-function equations.
//!
//! With `phi(x) = (ke/x)^x / e`, evaluated in log space as
//! `x (1 + ln k - ln x) - 1`:
//!
//! * `sigma` is the root of `phi(x) = 1` in `(0, 1)`,
//! * `lambda_upper` is the root of `phi(x) = 1` in `(k, ke)`,
//! * `rho_plus_low` / `rho_plus_high` are the roots of
//!   `(ke/x)^x e^(1-k) = 1` below and above `k`,
//! * `rho_minus = 1 / H_k`,
//! * `rho_minus_max` solves `1 + f = x sum_j ln(1 + f/j)` together with
//!   `sum_j 1/(j + f) = 1/x` (`j = 1..k`, `f > 0`).

mod roots;
mod table;

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use roots::solve_bracketed;

pub use table::{constants_table, format_csv, format_paper_table1, format_paper_table2, sig10, truncate4, truncate4_str, CSV_HEADER, CONJECTURED_COLUMNS, TABLE2_KS};

/// Lower end of the `sigma` bracket; `ln x` diverges at 0.
const SIGMA_FLOOR: f64 = 1e-12;

fn check_k(op: &'static str, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::domain(op, "k must be at least 1"));
    }
    Ok(())
}

/// `x (1 + ln k - ln x)`: the common exponent of both rate equations.
#[inline]
fn rate(x: f64, k: u32) -> f64 {
    x * (1.0 + (k as f64).ln() - x.ln())
}

#[inline]
fn rate_slope(x: f64, k: u32) -> f64 {
    (k as f64).ln() - x.ln()
}

/// `ln phi(x)`.
pub fn log_phi(x: f64, k: u32) -> Result<f64> {
    check_k("phi", k)?;
    if !(x > 0.0) {
        return Err(Error::domain("phi", format!("x must be positive, got {x}")));
    }
    Ok(rate(x, k) - 1.0)
}

/// `phi(x) = (ke/x)^x e^-1`.
pub fn phi(x: f64, k: u32) -> Result<f64> {
    log_phi(x, k).map(f64::exp)
}

/// Left-hand side of `(ke/x)^x e^(1-k) = 1`, minus one.
pub fn shifted_phi_residual(x: f64, k: u32) -> f64 {
    (rate(x, k) + 1.0 - k as f64).exp() - 1.0
}

/// `phi(x) - 1`.
pub fn phi_residual(x: f64, k: u32) -> f64 {
    (rate(x, k) - 1.0).exp() - 1.0
}

/// Root of `phi = 1` in `(0, 1]`. For `k = 1` the root is the double root 1.
pub fn solve_sigma(k: u32) -> Result<f64> {
    check_k("solve_sigma", k)?;
    if k == 1 {
        return Ok(1.0);
    }
    solve_bracketed("solve_sigma", |x| rate(x, k) - 1.0, |x| rate_slope(x, k), SIGMA_FLOOR, 1.0)
}

/// Largest root of `phi = 1`, which lies in `(k, ke)`; 1 when `k = 1`.
pub fn solve_lambda_upper(k: u32) -> Result<f64> {
    check_k("solve_lambda_upper", k)?;
    if k == 1 {
        return Ok(1.0);
    }
    let kf = k as f64;
    solve_bracketed("solve_lambda_upper", |x| rate(x, k) - 1.0, |x| rate_slope(x, k), kf, kf * E)
}

/// Root of `(ke/x)^x e^(1-k) = 1` in `(k, ke]`. Equals `e` for `k = 1`.
pub fn solve_rho_plus_high(k: u32) -> Result<f64> {
    check_k("solve_rho_plus_high", k)?;
    let kf = k as f64;
    if k == 1 {
        return Ok(E);
    }
    solve_bracketed(
        "solve_rho_plus_high",
        |x| rate(x, k) + 1.0 - kf,
        |x| rate_slope(x, k),
        kf,
        kf * E,
    )
}

/// Root of `(ke/x)^x e^(1-k) = 1` in `(0, k)`; needs `k >= 2`.
pub fn solve_rho_plus_low(k: u32) -> Result<f64> {
    check_k("solve_rho_plus_low", k)?;
    if k == 1 {
        return Err(Error::domain(
            "solve_rho_plus_low",
            "the lower root degenerates to 0 when k = 1",
        ));
    }
    let kf = k as f64;
    solve_bracketed(
        "solve_rho_plus_low",
        |x| rate(x, k) + 1.0 - kf,
        |x| rate_slope(x, k),
        SIGMA_FLOOR,
        kf,
    )
}

/// Both roots `(low, high)`; needs `k >= 2`.
pub fn solve_rho_plus_bounds(k: u32) -> Result<(f64, f64)> {
    Ok((solve_rho_plus_low(k)?, solve_rho_plus_high(k)?))
}

/// `H_k = sum_{j=1..k} 1/j`, summed in increasing `j` with Neumaier
/// compensation.
pub fn harmonic(k: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in 1..=k {
        let term = 1.0 / j as f64;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Solution `(x, f)` of the `rho_minus_max` system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoMinusMax {
    pub x: f64,
    pub f: f64,
}

/// `x(f) = 1 / sum_j 1/(j + f)`.
fn x_of_f(f: f64, k: u32) -> f64 {
    1.0 / (1..=k).map(|j| 1.0 / (j as f64 + f)).sum::<f64>()
}

fn log_sum(f: f64, k: u32) -> f64 {
    (1..=k).map(|j| (f / j as f64).ln_1p()).sum()
}

/// Residuals `(inner, outer)` of the two defining equations at `(x, f)`:
/// `sum 1/(j+f) - 1/x` and `1 + f - x sum ln(1 + f/j)`.
pub fn rho_minus_max_residuals(x: f64, f: f64, k: u32) -> (f64, f64) {
    let inner = (1..=k).map(|j| 1.0 / (j as f64 + f)).sum::<f64>() - 1.0 / x;
    let outer = 1.0 + f - x * log_sum(f, k);
    (inner, outer)
}

pub fn solve_rho_minus_max(k: u32) -> Result<RhoMinusMax> {
    check_k("solve_rho_minus_max", k)?;
    if k == 1 {
        return Err(Error::domain(
            "solve_rho_minus_max",
            "k = 1 is the uniform recursive tree; use rho_max = e",
        ));
    }
    // x is eliminated through the inner equation, leaving a scalar equation
    // in f with g(0) = 1 and g -> -inf.
    let g = |f: f64| 1.0 + f - x_of_f(f, k) * log_sum(f, k);
    let dg = |f: f64| {
        let x = x_of_f(f, k);
        let sq: f64 = (1..=k).map(|j| (j as f64 + f).powi(-2)).sum();
        -x * x * sq * log_sum(f, k)
    };
    let mut hi = 1.0;
    while g(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::domain("solve_rho_minus_max", "failed to bracket f"));
        }
    }
    let f = solve_bracketed("solve_rho_minus_max", g, dg, 0.0, hi)?;
    Ok(RhoMinusMax { x: x_of_f(f, k), f })
}

/// All limit constants for one arity.
///
/// Columns marked conjectured (see [`CONJECTURED_COLUMNS`]) are the one-sided
/// Chernoff bounds believed to be sharp; the rest are established limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub k: u32,
    pub sigma: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub rho_minus_min: f64,
    pub rho_minus: f64,
    pub rho_minus_max: f64,
    pub rho_min: f64,
    pub rho: f64,
    pub rho_max: f64,
    /// `None` for `k = 1`, where the lower root degenerates.
    pub rho_plus_low: Option<f64>,
    pub rho_plus: f64,
    pub rho_plus_high: f64,
    pub lambda_upper: f64,
    pub lambda_max: f64,
    /// The auxiliary `f` of the `rho_minus_max` system (`None` for `k = 1`).
    pub f_at_solution: Option<f64>,
}

impl ConstantsRow {
    pub fn rho_plus_min(&self) -> Option<f64> {
        self.rho_plus_low
    }

    pub fn rho_plus_max(&self) -> f64 {
        self.rho_plus_high
    }
}

pub fn constants_row(k: u32) -> Result<ConstantsRow> {
    check_k("constants_row", k)?;
    let sigma = solve_sigma(k)?;
    let h = harmonic(k as u64);
    // For k = 1 every path statistic is the recursive-tree depth, so the
    // maximal variants all collapse to e.
    let (rho_minus_max, f_at_solution) = if k == 1 {
        (E, None)
    } else {
        let s = solve_rho_minus_max(k)?;
        (s.x, Some(s.f))
    };
    let (sigma_max, rho_plus_low) = if k == 1 {
        (E, None)
    } else {
        (sigma, Some(solve_rho_plus_low(k)?))
    };
    let lambda_upper = solve_lambda_upper(k)?;
    Ok(ConstantsRow {
        k,
        sigma,
        sigma_min: 0.0,
        sigma_max,
        rho_minus_min: 0.0,
        rho_minus: 1.0 / h,
        rho_minus_max,
        rho_min: 0.0,
        rho: 1.0,
        rho_max: E,
        rho_plus_low,
        rho_plus: k as f64,
        rho_plus_high: solve_rho_plus_high(k)?,
        lambda_upper,
        lambda_max: k as f64 * E,
        f_at_solution,
    })
}
