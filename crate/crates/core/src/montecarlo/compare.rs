use serde::Serialize;

use super::{ExperimentRecord, Variant};
use crate::constants::ConstantsRow;
use crate::error::{Error, Result};
use crate::path_stats::Stat;

/// Default relative tolerance before a parameter is flagged.
pub const DEFAULT_REL_TOL: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub stat: Stat,
    pub variant: Variant,
    pub empirical: f64,
    pub se: f64,
    /// `None` where the limit is unknown or zero (no meaningful ratio).
    pub constant: Option<f64>,
    pub ratio: Option<f64>,
    pub conjectured: bool,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub k: u32,
    pub n: u64,
    pub rel_tol: f64,
    pub rows: Vec<CompareRow>,
}

impl Comparison {
    /// True when no established (non-conjectured) limit is flagged.
    pub fn established_ok(&self) -> bool {
        self.rows.iter().all(|r| r.conjectured || !r.flagged)
    }

    pub fn row(&self, stat: Stat, variant: Variant) -> Option<&CompareRow> {
        self.rows.iter().find(|r| r.stat == stat && r.variant == variant)
    }
}

/// Limit of `X / ln n` for one parameter, and whether it is only conjectured.
fn limit_for(row: &ConstantsRow, stat: Stat, variant: Variant) -> (Option<f64>, bool) {
    let conj = row.k >= 2;
    match (stat, variant) {
        (Stat::S, Variant::ValueAtN) => (Some(row.sigma), false),
        (Stat::S, Variant::Max1ToN) => (Some(row.sigma_max), false),
        (Stat::RMinus, Variant::ValueAtN) => (Some(row.rho_minus), false),
        (Stat::RMinus, Variant::Max1ToN) => (Some(row.rho_minus_max), conj),
        (Stat::R, Variant::ValueAtN) => (Some(row.rho), false),
        (Stat::R, Variant::Max1ToN) => (Some(row.rho_max), false),
        (Stat::RPlus, Variant::ValueAtN) => (Some(row.rho_plus), false),
        (Stat::RPlus, Variant::Max1ToN) => (Some(row.rho_plus_high), conj),
        (Stat::RPlus, Variant::MinHalfToN) => (row.rho_plus_low, conj),
        (Stat::L, Variant::ValueAtN) => (Some(row.lambda_upper), conj),
        (Stat::L, Variant::Max1ToN) => (Some(row.lambda_max), false),
        // lambda_min is unknown (k >= 2); the remaining minimal variants tend to 0.
        (Stat::L, Variant::MinHalfToN) if conj => (None, true),
        _ => (None, false),
    }
}

/// Ratio of each empirical `mean(X / ln n)` to its limit constant, flagged
/// when it strays more than `rel_tol` from 1.
pub fn compare_to_constants(record: &ExperimentRecord, row: &ConstantsRow, rel_tol: f64) -> Result<Comparison> {
    if record.config.k != row.k {
        return Err(Error::Usage(format!(
            "record has k = {} but the constants row has k = {}",
            record.config.k, row.k
        )));
    }
    let rows = record
        .aggregates
        .iter()
        .map(|agg| {
            let (constant, conjectured) = limit_for(row, agg.stat, agg.variant);
            let ratio = constant.filter(|c| *c > 0.0).map(|c| agg.mean / c);
            CompareRow {
                stat: agg.stat,
                variant: agg.variant,
                empirical: agg.mean,
                se: agg.se,
                constant,
                ratio,
                conjectured,
                flagged: ratio.is_some_and(|r| (r - 1.0).abs() > rel_tol),
            }
        })
        .collect();
    Ok(Comparison {
        k: row.k,
        n: record.config.n,
        rel_tol,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::constants_row;
    use crate::montecarlo::{run_experiment, ExperimentConfig};
    use crate::path_stats::StatSet;

    #[test]
    fn k_mismatch_is_usage_error() {
        let rec = run_experiment(&ExperimentConfig::new(2, 100, StatSet::ALL, 2, 0), None).unwrap();
        assert!(matches!(
            compare_to_constants(&rec, &constants_row(3).unwrap(), 0.1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn labels_conjectured_columns() {
        let rec = run_experiment(&ExperimentConfig::new(2, 1000, StatSet::ALL, 4, 0), None).unwrap();
        let c = compare_to_constants(&rec, &constants_row(2).unwrap(), 0.1).unwrap();
        assert_eq!(c.rows.len(), 15);
        assert!(c.row(Stat::L, Variant::ValueAtN).unwrap().conjectured);
        assert!(c.row(Stat::RMinus, Variant::Max1ToN).unwrap().conjectured);
        assert!(!c.row(Stat::S, Variant::ValueAtN).unwrap().conjectured);
        assert!(c.row(Stat::S, Variant::MinHalfToN).unwrap().ratio.is_none());
        assert!(c.row(Stat::L, Variant::MinHalfToN).unwrap().constant.is_none());
    }
}
