//! Empirical checks of the first-parent depth `R_n`.
//!
//! `R` only looks at slot 0, so none of these depend on `k` or on the
//! replacement mode; they draw first parents straight from the node streams.

use rayon::prelude::*;
use serde::Serialize;

use super::stats::mean_se;
use super::with_threads;
use crate::error::{Error, Result};
use crate::graph_model::{first_parent, replication_seed, DagSpec, ReplacementMode};
use crate::label_process::rn_tail_bound;
use crate::path_stats::{first_parent_depth, first_parent_profile, half_window_start, Stat};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub t: u64,
    pub frequency: f64,
    pub bound: f64,
    pub se: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheck {
    pub n: u64,
    pub reps: u64,
    pub rows: Vec<TailRow>,
}

impl TailCheck {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Empirical `P{R_n > t}` against the Chernoff bound for each `t`.
/// A row passes iff `frequency <= bound + 3 SE` (binomial SE at the observed
/// frequency).
pub fn check_rn_tail(n: u64, reps: u64, ts: &[u64], master_seed: u64, threads: Option<usize>) -> Result<TailCheck> {
    if n < 2 || reps < 1 {
        return Err(Error::Usage(format!("tail check needs n >= 2 and reps >= 1, got n={n}, reps={reps}")));
    }
    let min_t = (n as f64).ln().ceil() as u64;
    if let Some(&t) = ts.iter().find(|&&t| t < min_t) {
        return Err(Error::Usage(format!("t = {t} is below ceil(ln n) = {min_t}")));
    }
    let depths: Vec<u32> = with_threads(threads, || {
        (0..reps)
            .into_par_iter()
            .map(|rep| first_parent_depth(replication_seed(master_seed, rep), n))
            .collect()
    })?;
    let rows = ts
        .iter()
        .map(|&t| {
            let exceed = depths.iter().filter(|&&d| d as u64 > t).count();
            let frequency = exceed as f64 / reps as f64;
            let se = (frequency * (1.0 - frequency) / reps as f64).sqrt();
            let bound = rn_tail_bound(n, t)?;
            Ok(TailRow {
                t,
                frequency,
                bound,
                se,
                pass: frequency <= bound + 3.0 * se,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailCheck { n, reps, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinRCheck {
    pub n: u64,
    pub reps: u64,
    pub hits: u64,
    pub frequency: f64,
    pub se: f64,
}

/// Does some node in `[ceil(n/2), n]` sit at first-parent depth 1 or 2?
fn window_reaches_depth_two(seed: u64, n: u64) -> bool {
    (half_window_start(n)..=n).any(|node| {
        let p = first_parent(seed, node);
        p == 0 || first_parent(seed, p) == 0
    })
}

/// Frequency of `min_{ceil(n/2) <= l <= n} R_l <= 2`.
pub fn check_min_r(n: u64, reps: u64, master_seed: u64, threads: Option<usize>) -> Result<MinRCheck> {
    if n < 4 || reps < 1 {
        return Err(Error::Usage(format!("min-R check needs n >= 4 and reps >= 1, got n={n}, reps={reps}")));
    }
    let hits = with_threads(threads, || {
        (0..reps)
            .into_par_iter()
            .filter(|&rep| window_reaches_depth_two(replication_seed(master_seed, rep), n))
            .count() as u64
    })?;
    let frequency = hits as f64 / reps as f64;
    Ok(MinRCheck {
        n,
        reps,
        hits,
        frequency,
        se: (frequency * (1.0 - frequency) / reps as f64).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxRCheck {
    pub n: u64,
    pub reps: u64,
    /// `max_{l <= n} R_l / ln n` per replication.
    pub ratios: Vec<f64>,
    pub mean: f64,
    pub se: f64,
    pub sd: f64,
}

impl MaxRCheck {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        lo <= self.mean && self.mean <= hi
    }
}

/// `max_{1 <= l <= n} R_l / ln n` over replications.
pub fn check_max_r(n: u64, reps: u64, master_seed: u64, threads: Option<usize>) -> Result<MaxRCheck> {
    if n < 10 || reps < 1 {
        return Err(Error::Usage(format!("max-R check needs n >= 10 and reps >= 1, got n={n}, reps={reps}")));
    }
    let ln_n = (n as f64).ln();
    let ratios = with_threads(threads, || {
        (0..reps)
            .into_par_iter()
            .map(|rep| {
                let spec = DagSpec::new(n, 1, ReplacementMode::With, replication_seed(master_seed, rep));
                let profile = first_parent_profile(&spec)?;
                let max = profile.get(Stat::R).unwrap().iter().copied().max().unwrap();
                Ok(max as f64 / ln_n)
            })
            .collect::<Result<Vec<f64>>>()
    })??;
    let (mean, se) = mean_se(&ratios);
    Ok(MaxRCheck {
        n,
        reps,
        mean,
        se,
        sd: se * (reps as f64).sqrt(),
        ratios,
    })
}
