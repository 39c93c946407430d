use rayon::prelude::*;
use serde::Serialize;

use super::stats::mean_se;
use super::with_threads;
use crate::error::{Error, Result};
use crate::graph_model::{replication_seed, RngStream};
use crate::label_process::{sample_brw, DEFAULT_BRW_BUDGET};

/// Replicated `-ln Z_ell` draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrwEstimate {
    pub ell: u32,
    pub k: u32,
    pub values: Vec<f64>,
    pub mean: f64,
    pub se: f64,
}

impl BrwEstimate {
    /// `mean / ell` with its standard error.
    pub fn per_step(&self) -> (f64, f64) {
        (self.mean / self.ell as f64, self.se / self.ell as f64)
    }
}

pub fn estimate_brw(ell: u32, k: u32, samples: u64, master_seed: u64, threads: Option<usize>) -> Result<BrwEstimate> {
    if samples < 2 {
        return Err(Error::Usage(format!("brw estimate needs at least 2 samples, got {samples}")));
    }
    let values = with_threads(threads, || {
        (0..samples)
            .into_par_iter()
            .map(|rep| {
                let mut rng = RngStream::new(replication_seed(master_seed, rep), 0);
                sample_brw(ell, k, &mut rng, DEFAULT_BRW_BUDGET).map(|s| s.value)
            })
            .collect::<Result<Vec<f64>>>()
    })??;
    let (mean, se) = mean_se(&values);
    Ok(BrwEstimate { ell, k, values, mean, se })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_mean_is_ell() {
        let e = estimate_brw(5, 1, 4000, 9, None).unwrap();
        assert!((e.mean - 5.0).abs() < 4.0 * e.se, "{} +- {}", e.mean, e.se);
    }

    #[test]
    fn thread_count_irrelevant() {
        let a = estimate_brw(6, 2, 40, 3, Some(1)).unwrap();
        let b = estimate_brw(6, 2, 40, 3, Some(3)).unwrap();
        assert_eq!(a, b);
    }
}
