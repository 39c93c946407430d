//! Seeded, replicated experiments over random k-dags.
//!
//! Replication `r` builds the dag with seed `replication_seed(master, r)`.
//! Replications run on a rayon pool and are merged in index order, so the
//! record does not depend on the worker count.

mod brw;
mod checks;
mod compare;
mod persist;
mod stats;

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_model::{replication_seed, DagSpec, ReplacementMode};
use crate::path_stats::{compute_profiles, first_parent_profile, summarize, ParamSummary, Stat, StatSet};

pub use brw::{estimate_brw, BrwEstimate};
pub use checks::{check_max_r, check_min_r, check_rn_tail, MaxRCheck, MinRCheck, TailCheck, TailRow};
pub use compare::{compare_to_constants, CompareRow, Comparison, DEFAULT_REL_TOL};
pub use persist::{export_csv, load, persist, read_record, write_record, write_record_untimed, FORMAT_VERSION};
pub use stats::{mean_se, quantile, Aggregate, Variant};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k: u32,
    pub n: u64,
    pub mode: ReplacementMode,
    pub stats: StatSet,
    pub replications: u64,
    pub master_seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub compare: bool,
}

impl ExperimentConfig {
    pub fn new(k: u32, n: u64, stats: StatSet, replications: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            k,
            n,
            mode: ReplacementMode::With,
            stats,
            replications,
            master_seed,
            output: None,
            compare: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::Usage("replications must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Usage(format!("n must be at least 2, got {}", self.n)));
        }
        if self.stats.is_empty() {
            return Err(Error::Usage("statistics subset must be non-empty".into()));
        }
        self.dag_spec(0).validate()
    }

    /// Dag of replication `rep`.
    pub fn dag_spec(&self, rep: u64) -> DagSpec {
        DagSpec::new(self.n, self.k, self.mode, replication_seed(self.master_seed, rep))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub summaries: Vec<ParamSummary>,
    pub aggregates: Vec<Aggregate>,
    pub wall_clock_secs: f64,
    pub artifact_version: String,
    pub generator: String,
}

impl ExperimentRecord {
    pub(crate) fn assemble(config: ExperimentConfig, summaries: Vec<ParamSummary>, wall_clock_secs: f64) -> Self {
        let aggregates = stats::aggregate(&config, &summaries);
        ExperimentRecord {
            config,
            summaries,
            aggregates,
            wall_clock_secs,
            artifact_version: crate::VERSION.to_string(),
            generator: crate::graph_model::GENERATOR_FAMILY.to_string(),
        }
    }

    pub fn aggregate(&self, stat: Stat, variant: Variant) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.stat == stat && a.variant == variant)
    }
}

/// Profile and summarize one replication, checking the per-node sandwich and
/// the summary ordering on the way.
pub fn run_replication(config: &ExperimentConfig, rep: u64) -> Result<ParamSummary> {
    let spec = config.dag_spec(rep);
    let profile = if config.stats == StatSet::only(Stat::R) {
        first_parent_profile(&spec)?
    } else {
        compute_profiles(&spec, config.stats)?
    };
    profile.verify_sandwich()?;
    let summary = summarize(&profile);
    if !summary.is_consistent() {
        return Err(Error::Usage(format!("inconsistent summary {summary:?}")));
    }
    Ok(summary)
}

/// Run `f` on a pool of `threads` workers, or the global pool when `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Resource(format!("cannot start {t} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentRecord> {
    config.validate()?;
    let start = Instant::now();
    let summaries = with_threads(threads, || {
        (0..config.replications)
            .into_par_iter()
            .map(|rep| {
                run_replication(config, rep).map_err(|e| Error::Replication {
                    rep,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(ExperimentRecord::assemble(
        config.clone(),
        summaries,
        start.elapsed().as_secs_f64(),
    ))
}

/// One record per size in `ns`, sharing every other setting.
pub fn run_schedule(config: &ExperimentConfig, ns: &[u64], threads: Option<usize>) -> Result<Vec<ExperimentRecord>> {
    ns.iter()
        .map(|&n| {
            let cfg = ExperimentConfig { n, ..config.clone() };
            run_experiment(&cfg, threads)
        })
        .collect()
}

/// `10^lo, 10^(lo+1), ..., 10^hi`.
pub fn decades(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|e| 10u64.pow(e)).collect()
}
