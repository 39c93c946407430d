//! Uniform random recursive k-dags.
//!
//! Node 0 is the root. Every node `i >= 1` owns `k` parent slots filled with
//! indices drawn uniformly from `{0, ..., i - 1}`. The draws of node `i` come
//! from stream `i` of the dag seed, so any row of the parent table can be
//! recomputed on its own and tables can be filled in parallel.

mod dump;
mod rng;

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dump::{read_dump, write_dump, write_stream_dump};
pub use rng::{replication_seed, RngStream, GENERATOR_FAMILY};

/// Largest supported parent arity.
pub const MAX_ARITY: u32 = 64;

/// Nodes per parallel work unit when materializing a table.
const BLOCK_NODES: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReplacementMode {
    With,
    Without,
}

impl fmt::Display for ReplacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReplacementMode::With => "with",
            ReplacementMode::Without => "without",
        })
    }
}

impl FromStr for ReplacementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "with" => Ok(ReplacementMode::With),
            "without" => Ok(ReplacementMode::Without),
            other => Err(Error::Usage(format!(
                "unknown replacement mode `{other}` (expected `with` or `without`)"
            ))),
        }
    }
}

/// Parameters that fully determine a dag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagSpec {
    pub n: u64,
    pub k: u32,
    pub mode: ReplacementMode,
    pub seed: u64,
}

impl DagSpec {
    pub fn new(n: u64, k: u32, mode: ReplacementMode, seed: u64) -> Self {
        DagSpec { n, k, mode, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Usage("n must be at least 1".into()));
        }
        if self.n > i64::MAX as u64 {
            return Err(Error::Usage(format!("n must be at most 2^63-1, got {}", self.n)));
        }
        if self.k < 1 || self.k > MAX_ARITY {
            return Err(Error::Usage(format!(
                "k must lie in 1..={MAX_ARITY}, got {}",
                self.k
            )));
        }
        Ok(())
    }

    /// Visit nodes `1..=n` in order without materializing the table.
    pub fn stream<F>(&self, visitor: F) -> Result<()>
    where
        F: FnMut(u64, &[u64]) -> ControlFlow<()>,
    {
        stream_nodes(self.n, self.k, self.mode, self.seed, visitor)
    }
}

/// Fill `out` (length `k`) with the parents of `node`.
///
/// Slot order is draw order. Without replacement, a node with fewer than `k`
/// predecessors receives each of them once (in random order) and the
/// remaining slots hold the root.
#[inline]
pub fn draw_parents_into(node: u64, mode: ReplacementMode, rng: &mut RngStream, out: &mut [u64]) {
    debug_assert!(node >= 1 && !out.is_empty());
    match mode {
        ReplacementMode::With => {
            for slot in out.iter_mut() {
                *slot = rng.below(node);
            }
        }
        ReplacementMode::Without => {
            let k = out.len();
            let distinct = if (node as usize) < k { node as usize } else { k };
            let mut filled = 0;
            while filled < distinct {
                let p = rng.below(node);
                if !out[..filled].contains(&p) {
                    out[filled] = p;
                    filled += 1;
                }
            }
            out[distinct..].fill(0);
        }
    }
}

/// Parents of `node` as drawn from `rng`.
pub fn draw_parents(node: u64, k: u32, mode: ReplacementMode, rng: &mut RngStream) -> Vec<u64> {
    let mut out = vec![0; k as usize];
    draw_parents_into(node, mode, rng, &mut out);
    out
}

/// Slot-0 parent of `node` in the dag with the given seed. Identical in both
/// replacement modes, since the first draw is never rejected.
#[inline]
pub fn first_parent(seed: u64, node: u64) -> u64 {
    RngStream::new(seed, node).below(node)
}

/// Visit `(node, parents)` for `node = 1..=n` in increasing order.
///
/// The visited rows are exactly the rows `build_dag` stores for the same
/// arguments. A visitor returning `Break` stops the stream and the call
/// reports [`Error::Aborted`].
pub fn stream_nodes<F>(n: u64, k: u32, mode: ReplacementMode, seed: u64, mut visitor: F) -> Result<()>
where
    F: FnMut(u64, &[u64]) -> ControlFlow<()>,
{
    DagSpec::new(n, k, mode, seed).validate()?;
    let mut buf = vec![0u64; k as usize];
    for node in 1..=n {
        let mut rng = RngStream::new(seed, node);
        draw_parents_into(node, mode, &mut rng, &mut buf);
        if visitor(node, &buf).is_break() {
            return Err(Error::Aborted(node));
        }
    }
    Ok(())
}

/// Storage width of a materialized parent table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Storage {
    #[default]
    Wide,
    /// 32-bit indices; only valid when `n < 2^32`.
    Compact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ParentTable {
    Wide(Vec<u64>),
    Compact(Vec<u32>),
}

/// A realized random recursive k-dag on nodes `0..=n`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDag {
    spec: DagSpec,
    parents: ParentTable,
}

fn alloc_table<T: Clone + Default>(slots: usize, width: usize) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(slots).map_err(|_| {
        Error::Resource(format!(
            "cannot allocate parent table of {slots} slots ({} bytes)",
            slots.saturating_mul(width)
        ))
    })?;
    v.resize(slots, T::default());
    Ok(v)
}

fn fill_block<T: Copy>(first_node: u64, k: usize, spec: &DagSpec, block: &mut [T], conv: impl Fn(u64) -> T) {
    let mut buf = vec![0u64; k];
    for (offset, row) in block.chunks_mut(k).enumerate() {
        let node = first_node + offset as u64;
        let mut rng = RngStream::new(spec.seed, node);
        draw_parents_into(node, spec.mode, &mut rng, &mut buf);
        for (dst, &p) in row.iter_mut().zip(&buf) {
            *dst = conv(p);
        }
    }
}

/// Materialize the dag described by `(n, k, mode, seed)` with 64-bit storage.
pub fn build_dag(n: u64, k: u32, mode: ReplacementMode, seed: u64) -> Result<KDag> {
    build_dag_with(DagSpec::new(n, k, mode, seed), Storage::Wide)
}

pub fn build_dag_with(spec: DagSpec, storage: Storage) -> Result<KDag> {
    spec.validate()?;
    let k = spec.k as usize;
    let slots = usize::try_from(spec.n)
        .ok()
        .and_then(|n| n.checked_mul(k))
        .ok_or_else(|| {
            Error::Resource(format!(
                "parent table of {} x {} slots does not fit in the address space",
                spec.n, spec.k
            ))
        })?;
    let block = BLOCK_NODES * k;
    let parents = match storage {
        Storage::Wide => {
            let mut table = alloc_table::<u64>(slots, 8)?;
            table.par_chunks_mut(block).enumerate().for_each(|(b, chunk)| {
                fill_block(1 + (b * BLOCK_NODES) as u64, k, &spec, chunk, |p| p)
            });
            ParentTable::Wide(table)
        }
        Storage::Compact => {
            if spec.n >= 1 << 32 {
                return Err(Error::Usage(format!(
                    "compact storage needs n < 2^32, got {}",
                    spec.n
                )));
            }
            let mut table = alloc_table::<u32>(slots, 4)?;
            table.par_chunks_mut(block).enumerate().for_each(|(b, chunk)| {
                fill_block(1 + (b * BLOCK_NODES) as u64, k, &spec, chunk, |p| p as u32)
            });
            ParentTable::Compact(table)
        }
    };
    Ok(KDag { spec, parents })
}

impl KDag {
    /// Assemble a dag from explicit rows (`rows[i - 1]` are the parents of
    /// node `i`). Checks arity and that every parent precedes its child.
    pub fn from_rows(spec: DagSpec, rows: &[Vec<u64>]) -> Result<KDag> {
        spec.validate()?;
        if rows.len() as u64 != spec.n {
            return Err(Error::Usage(format!(
                "expected {} parent rows, got {}",
                spec.n,
                rows.len()
            )));
        }
        let mut table = Vec::with_capacity(rows.len() * spec.k as usize);
        for (i, row) in rows.iter().enumerate() {
            let node = i as u64 + 1;
            if row.len() != spec.k as usize {
                return Err(Error::Usage(format!(
                    "node {node} has {} parents, expected {}",
                    row.len(),
                    spec.k
                )));
            }
            if let Some(&bad) = row.iter().find(|&&p| p >= node) {
                return Err(Error::Usage(format!(
                    "node {node} has parent {bad}, parents must be smaller than the node"
                )));
            }
            table.extend_from_slice(row);
        }
        Ok(KDag {
            spec,
            parents: ParentTable::Wide(table),
        })
    }

    pub fn spec(&self) -> &DagSpec {
        &self.spec
    }

    pub fn n(&self) -> u64 {
        self.spec.n
    }

    pub fn k(&self) -> u32 {
        self.spec.k
    }

    pub fn mode(&self) -> ReplacementMode {
        self.spec.mode
    }

    pub fn seed(&self) -> u64 {
        self.spec.seed
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.parents, ParentTable::Compact(_))
    }

    /// Copy the parents of `node` (1..=n) into `out`.
    #[inline]
    pub fn parents_into(&self, node: u64, out: &mut [u64]) {
        assert!(node >= 1 && node <= self.spec.n, "node {node} out of range");
        let k = self.spec.k as usize;
        let start = (node as usize - 1) * k;
        match &self.parents {
            ParentTable::Wide(t) => out.copy_from_slice(&t[start..start + k]),
            ParentTable::Compact(t) => {
                for (dst, &p) in out.iter_mut().zip(&t[start..start + k]) {
                    *dst = p as u64;
                }
            }
        }
    }

    /// Parents of `node`; the root has none.
    pub fn parents(&self, node: u64) -> Vec<u64> {
        if node == 0 {
            return Vec::new();
        }
        let mut out = vec![0; self.spec.k as usize];
        self.parents_into(node, &mut out);
        out
    }

    /// Visit rows in increasing node order, mirroring [`stream_nodes`].
    pub fn visit<F>(&self, mut visitor: F) -> Result<()>
    where
        F: FnMut(u64, &[u64]) -> ControlFlow<()>,
    {
        let mut buf = vec![0u64; self.spec.k as usize];
        for node in 1..=self.spec.n {
            self.parents_into(node, &mut buf);
            if visitor(node, &buf).is_break() {
                return Err(Error::Aborted(node));
            }
        }
        Ok(())
    }
}

/// Anything that can replay a dag's rows in increasing node order.
pub trait NodeSource {
    fn n(&self) -> u64;
    fn k(&self) -> u32;
    fn for_each_node<F>(&self, visitor: F) -> Result<()>
    where
        F: FnMut(u64, &[u64]) -> ControlFlow<()>;
}

impl NodeSource for KDag {
    fn n(&self) -> u64 {
        self.spec.n
    }
    fn k(&self) -> u32 {
        self.spec.k
    }
    fn for_each_node<F>(&self, visitor: F) -> Result<()>
    where
        F: FnMut(u64, &[u64]) -> ControlFlow<()>,
    {
        self.visit(visitor)
    }
}

impl NodeSource for DagSpec {
    fn n(&self) -> u64 {
        self.n
    }
    fn k(&self) -> u32 {
        self.k
    }
    fn for_each_node<F>(&self, visitor: F) -> Result<()>
    where
        F: FnMut(u64, &[u64]) -> ControlFlow<()>,
    {
        self.stream(visitor)
    }
}
