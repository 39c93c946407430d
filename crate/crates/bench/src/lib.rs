//! Fixtures shared by the benchmarks.

use recdag::{DagSpec, ReplacementMode};

pub const SEED: u64 = 0x5EED;

pub fn spec(n: u64, k: u32) -> DagSpec {
    DagSpec::new(n, k, ReplacementMode::With, SEED)
}
