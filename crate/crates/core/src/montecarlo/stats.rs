use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::path_stats::{ParamSummary, Stat, StatSummary};

/// Which of the three scalar variants of a statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    ValueAtN,
    #[serde(rename = "max_1_to_n")]
    Max1ToN,
    MinHalfToN,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::ValueAtN, Variant::Max1ToN, Variant::MinHalfToN];

    pub fn name(self) -> &'static str {
        match self {
            Variant::ValueAtN => "value_at_n",
            Variant::Max1ToN => "max_1_to_n",
            Variant::MinHalfToN => "min_half_to_n",
        }
    }

    pub fn pick(self, s: &StatSummary) -> u32 {
        match self {
            Variant::ValueAtN => s.value_at_n,
            Variant::Max1ToN => s.max_1_to_n,
            Variant::MinHalfToN => s.min_half_to_n,
        }
    }
}

/// Summary statistics of `X / ln n` across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub stat: Stat,
    pub variant: Variant,
    pub count: usize,
    pub mean: f64,
    pub se: f64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
}

/// Mean and standard error of the mean (zero for a single value).
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub(super) fn aggregate(config: &ExperimentConfig, summaries: &[ParamSummary]) -> Vec<Aggregate> {
    let ln_n = (config.n as f64).ln();
    let mut out = Vec::new();
    for stat in config.stats.iter() {
        for variant in Variant::ALL {
            let mut xs: Vec<f64> = summaries
                .iter()
                .filter_map(|s| s.get(stat))
                .map(|e| variant.pick(e) as f64 / ln_n)
                .collect();
            if xs.is_empty() {
                continue;
            }
            let (mean, se) = mean_se(&xs);
            xs.sort_by(f64::total_cmp);
            out.push(Aggregate {
                stat,
                variant,
                count: xs.len(),
                mean,
                se,
                median: quantile(&xs, 0.5),
                q05: quantile(&xs, 0.05),
                q95: quantile(&xs, 0.95),
            });
        }
    }
    out
}
