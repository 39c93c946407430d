//! Root-path statistics of every node, computed in one forward pass.
//!
//! For node `i` with parents `p_1..p_k`:
//!
//! * `S[i]  = 1 + min_p S[p]` (shortest path to the root)
//! * `R-[i] = 1 + R-[min p]` (follow the smallest-index parent)
//! * `R[i]  = 1 + R[p_1]` (follow the first-drawn parent)
//! * `R+[i] = 1 + R+[max p]` (follow the largest-index parent)
//! * `L[i]  = 1 + max_p L[p]` (longest path to the root)

mod oracle;
mod summary;

use std::fmt;
use std::io::Write;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_model::{first_parent, DagSpec, NodeSource};

pub use oracle::{brute_force_extremes, DEFAULT_PATH_BUDGET};
pub use summary::{half_window_start, summarize, ParamSummary, StatSummary};

/// One of the five path statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stat {
    S,
    #[serde(rename = "Rminus")]
    RMinus,
    R,
    #[serde(rename = "Rplus")]
    RPlus,
    L,
}

impl Stat {
    pub const ALL: [Stat; 5] = [Stat::S, Stat::RMinus, Stat::R, Stat::RPlus, Stat::L];

    pub fn name(self) -> &'static str {
        match self {
            Stat::S => "S",
            Stat::RMinus => "Rminus",
            Stat::R => "R",
            Stat::RPlus => "Rplus",
            Stat::L => "L",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stat::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown statistic `{s}` (expected S, Rminus, R, Rplus or L)")))
    }
}

/// A subset of the five statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct StatSet(u8);

impl StatSet {
    pub const ALL: StatSet = StatSet(0b1_1111);

    pub fn only(stat: Stat) -> Self {
        StatSet(stat.bit())
    }

    pub fn of(stats: &[Stat]) -> Self {
        StatSet(stats.iter().fold(0, |acc, s| acc | s.bit()))
    }

    pub fn contains(self, stat: Stat) -> bool {
        self.0 & stat.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Stat> {
        Stat::ALL.into_iter().filter(move |s| self.contains(*s))
    }
}

impl fmt::Display for StatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(Stat::name).collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for StatSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let stats = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<Vec<Stat>>>()?;
        let set = StatSet::of(&stats);
        if set.is_empty() {
            return Err(Error::Usage("statistics subset must be non-empty".into()));
        }
        Ok(set)
    }
}

impl Serialize for StatSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for StatSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Per-node depth columns; only the selected statistics are populated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthProfile {
    n: u64,
    columns: [Option<Vec<u32>>; 5],
}

impl DepthProfile {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn stats(&self) -> StatSet {
        StatSet::of(&Stat::ALL.into_iter().filter(|s| self.columns[*s as usize].is_some()).collect::<Vec<_>>())
    }

    /// Column for `stat`, indexed by node `0..=n`.
    pub fn get(&self, stat: Stat) -> Option<&[u32]> {
        self.columns[stat as usize].as_deref()
    }

    /// Check `S <= R-, R, R+ <= L <= i` on every node for the columns
    /// present, plus the root being at depth 0.
    pub fn verify_sandwich(&self) -> Result<()> {
        let fail = |node: usize, what: &str| {
            Err(Error::Usage(format!("sandwich violated at node {node}: {what}")))
        };
        for stat in self.stats().iter() {
            let col = self.get(stat).unwrap();
            if col[0] != 0 {
                return fail(0, &format!("{stat}[0] != 0"));
            }
            for (i, &d) in col.iter().enumerate().skip(1) {
                if d < 1 || d as u64 > i as u64 {
                    return fail(i, &format!("{stat}[{i}] = {d} outside [1, {i}]"));
                }
            }
        }
        let s = self.get(Stat::S);
        let l = self.get(Stat::L);
        for stat in [Stat::RMinus, Stat::R, Stat::RPlus] {
            let Some(col) = self.get(stat) else { continue };
            for (i, &d) in col.iter().enumerate() {
                if let Some(s) = s {
                    if s[i] > d {
                        return fail(i, &format!("S = {} > {stat} = {d}", s[i]));
                    }
                }
                if let Some(l) = l {
                    if d > l[i] {
                        return fail(i, &format!("{stat} = {d} > L = {}", l[i]));
                    }
                }
            }
        }
        if let (Some(s), Some(l)) = (s, l) {
            if let Some(i) = (0..s.len()).find(|&i| s[i] > l[i]) {
                return fail(i, "S > L");
            }
        }
        Ok(())
    }

    /// Tab-separated dump, `NA` for unselected columns.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "node\tS\tRminus\tR\tRplus\tL")?;
        for node in 0..=self.n as usize {
            write!(out, "{node}")?;
            for col in &self.columns {
                match col {
                    Some(c) => write!(out, "\t{}", c[node])?,
                    None => write!(out, "\tNA")?,
                }
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn alloc_column(len: usize) -> Result<Vec<u32>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).map_err(|_| {
        Error::Resource(format!("cannot allocate depth column of {len} entries ({} bytes)", len * 4))
    })?;
    v.resize(len, 0);
    Ok(v)
}

/// Run the depth recurrences over `source` for the selected statistics.
pub fn compute_profiles<S: NodeSource>(source: &S, stats: StatSet) -> Result<DepthProfile> {
    if stats.is_empty() {
        return Err(Error::Usage("statistics subset must be non-empty".into()));
    }
    let n = source.n();
    if n >= u32::MAX as u64 {
        return Err(Error::Resource(format!(
            "depths are stored as 32-bit values; n = {n} exceeds the 2^32 - 2 cap"
        )));
    }
    let len = n as usize + 1;
    let mut columns: [Option<Vec<u32>>; 5] = Default::default();
    for stat in stats.iter() {
        columns[stat as usize] = Some(alloc_column(len)?);
    }
    let [s, rm, r, rp, l] = &mut columns;
    source.for_each_node(|node, parents| {
        let i = node as usize;
        if let Some(s) = s {
            let best = parents.iter().map(|&p| s[p as usize]).min().unwrap();
            s[i] = best + 1;
        }
        if let Some(l) = l {
            let best = parents.iter().map(|&p| l[p as usize]).max().unwrap();
            l[i] = best + 1;
        }
        if let Some(r) = r {
            r[i] = r[parents[0] as usize] + 1;
        }
        if let Some(rm) = rm {
            let p = *parents.iter().min().unwrap();
            rm[i] = rm[p as usize] + 1;
        }
        if let Some(rp) = rp {
            let p = *parents.iter().max().unwrap();
            rp[i] = rp[p as usize] + 1;
        }
        ControlFlow::Continue(())
    })?;
    Ok(DepthProfile { n, columns })
}

/// `R` column only, drawing just the slot-0 parent of each node. Equal to
/// `compute_profiles(spec, StatSet::only(Stat::R))` at a fraction of the cost.
pub fn first_parent_profile(spec: &DagSpec) -> Result<DepthProfile> {
    spec.validate()?;
    let n = spec.n;
    if n >= u32::MAX as u64 {
        return Err(Error::Resource(format!(
            "depths are stored as 32-bit values; n = {n} exceeds the 2^32 - 2 cap"
        )));
    }
    let mut r = alloc_column(n as usize + 1)?;
    for node in 1..=n as usize {
        r[node] = r[first_parent(spec.seed, node as u64) as usize] + 1;
    }
    let mut columns: [Option<Vec<u32>>; 5] = Default::default();
    columns[Stat::R as usize] = Some(r);
    Ok(DepthProfile { n, columns })
}

/// `R[node]` by walking the first-parent chain, O(depth) time and memory.
pub fn first_parent_depth(seed: u64, node: u64) -> u32 {
    let mut depth = 0;
    let mut v = node;
    while v != 0 {
        v = first_parent(seed, v);
        depth += 1;
    }
    depth
}
