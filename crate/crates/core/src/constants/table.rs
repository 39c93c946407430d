use std::fmt::Write as _;

use super::{constants_row, ConstantsRow};
use crate::error::Result;

/// Arities of the per-k table: 2..=30, then 35, 40, 45, 50.
pub const TABLE2_KS: [u32; 33] = [
    2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28,
    29, 30, 35, 40, 45, 50,
];

pub const CSV_HEADER: &str =
    "k,sigma,rho_minus,rho,rho_plus,rho_plus_low,rho_plus_high,rho_minus_max,lambda_upper,rho_max,lambda_max";

/// Columns that hold upper/lower bounds believed, but not proven, to be the
/// limits.
pub const CONJECTURED_COLUMNS: [&str; 4] = ["rho_minus_max", "rho_plus_low", "rho_plus_high", "lambda_upper"];

pub fn constants_table(ks: &[u32]) -> Result<Vec<ConstantsRow>> {
    ks.iter().map(|&k| constants_row(k)).collect()
}

/// Truncate (not round) to four decimals.
pub fn truncate4(v: f64) -> f64 {
    // The nudge absorbs representation error such as 0.48 * 1e4 = 4799.999...
    (v * 1e4 + 1e-7).floor() / 1e4
}

/// Four-decimal truncation printed without trailing zeros (`0.48`, `2`).
pub fn truncate4_str(v: f64) -> String {
    let t = truncate4(v);
    let s = format!("{t:.4}");
    if (v - t).abs() > 1e-9 {
        // a cut-off value keeps all four places, like `4.3110...`
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Ten significant digits.
pub fn sig10(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (9 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn format_csv(rows: &[ConstantsRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let low = r.rho_plus_low.map(sig10).unwrap_or_else(|| "NA".into());
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            sig10(r.sigma),
            sig10(r.rho_minus),
            sig10(r.rho),
            sig10(r.rho_plus),
            low,
            sig10(r.rho_plus_high),
            sig10(r.rho_minus_max),
            sig10(r.lambda_upper),
            sig10(r.rho_max),
            sig10(r.lambda_max),
        )
        .unwrap();
    }
    out
}

/// The min / value / max block for one arity. `lambda_min` is unknown and
/// printed as `?`.
pub fn format_paper_table1(row: &ConstantsRow) -> String {
    let t = truncate4_str;
    let low = row.rho_plus_low.map(t).unwrap_or_else(|| "0".into());
    let mut out = String::new();
    writeln!(out, "# k={} conjectured: rho_minus_max rho_plus_min rho_plus_max lambda", row.k).unwrap();
    out.push_str("param,min,value,max\n");
    writeln!(out, "sigma,{},{},{}", t(row.sigma_min), t(row.sigma), t(row.sigma_max)).unwrap();
    writeln!(out, "rho_minus,{},{},{}", t(row.rho_minus_min), t(row.rho_minus), t(row.rho_minus_max)).unwrap();
    writeln!(out, "rho,{},{},{}", t(row.rho_min), t(row.rho), t(row.rho_max)).unwrap();
    writeln!(out, "rho_plus,{},{},{}", low, t(row.rho_plus), t(row.rho_plus_high)).unwrap();
    writeln!(out, "lambda,?,{},{}", t(row.lambda_upper), t(row.lambda_max)).unwrap();
    out
}

/// One `k,sigma,rho_minus,rho_minus_max` line per arity.
pub fn format_paper_table2(rows: &[ConstantsRow]) -> String {
    let mut out = String::from("k,sigma,rho_minus,rho_minus_max\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.k,
            truncate4_str(r.sigma),
            truncate4_str(r.rho_minus),
            truncate4_str(r.rho_minus_max)
        )
        .unwrap();
    }
    out
}
