//! Simulator and numerics workbench for uniform random recursive k-dags.
//!
//! * [`graph_model`]: seeded generation, materialized or streamed.
//! * [`path_stats`]: shortest, greedy, first-parent and longest root paths.
//! * [`constants`]: limit constants from the rate-function equations.
//! * [`label_process`]: ancestor-label chains, gamma tail bounds, the
//!   first-parent tail bound and the branching-random-walk estimator.
//! * [`montecarlo`]: replicated experiments, checks and persistence.

// `!(x > 0.0)` style guards are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod graph_model;
pub mod label_process;
pub mod montecarlo;
pub mod path_stats;

pub use constants::{constants_row, constants_table, ConstantsRow};
pub use error::{Error, Result};
pub use graph_model::{build_dag, stream_nodes, DagSpec, KDag, ReplacementMode, RngStream};
pub use montecarlo::{ExperimentConfig, ExperimentRecord};
pub use path_stats::{compute_profiles, summarize, DepthProfile, ParamSummary, Stat, StatSet};

/// Crate version, reported alongside the generator family.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
