//! Command-line surface and value parsers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use recdag::graph_model::MAX_ARITY;
use recdag::{ReplacementMode, StatSet};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "recdag", about = "Random recursive k-dag simulator and constants workbench")]
pub struct Cli {
    /// Worker threads for replications (default: one per core)
    #[arg(long, global = true, value_parser = parse_threads)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Write one dag as a tab-separated parent table
    Generate(GenerateArgs),
    /// Path statistics of one dag
    Stats(StatsArgs),
    /// Limit constants for one or more k
    Constants(ConstantsArgs),
    /// Replicated experiment over the fifteen parameters
    Simulate(SimulateArgs),
    /// Empirical tail of R_n against its bound
    Tailcheck(TailcheckArgs),
    /// Frequency of min R over the upper half window being at most 2
    Minrcheck(MinrcheckArgs),
    /// max_{l<=n} R_l / ln n against a window
    Maxrcheck(MaxrcheckArgs),
    /// Branching-random-walk draws of -ln Z_ell
    Brw(BrwArgs),
    /// Closed-form tail bound for R_n
    Tailbound(TailboundArgs),
    /// Compare a stored record with the solved constants
    Compare(CompareArgs),
    /// Re-emit a stored record
    Export(ExportArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct GraphArgs {
    /// Parents per node, 1..=64
    #[arg(long, default_value = "2", value_parser = parse_k)]
    pub k: u32,
    /// Last node index (nodes are 0..=n); scientific notation accepted
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    #[arg(long, default_value_t = ReplacementMode::With, value_parser = parse_mode)]
    pub mode: ReplacementMode,
    /// Master seed; drawn from system entropy and reported when omitted
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct OutArgs {
    /// Write data here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Jsonl,
    PaperTable,
    Tsv,
}

#[derive(Args, Debug, Serialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct StatsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Statistics to compute: any of S,Rminus,R,Rplus,L
    #[arg(long, default_value = "S", value_parser = parse_stats)]
    pub stats: StatSet,
    /// csv or jsonl for the summary; tsv for the per-node profile
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstantsArgs {
    /// k values, e.g. `2`, `2..30`, `2..30,35,40` (default 2, or the table 2 list)
    #[arg(long, value_parser = parse_k_list)]
    pub k: Option<KList>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Print the layout of constants table 1 (single k) or 2 (the standard k list)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub paper_table: Option<u8>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[arg(long, default_value = "2", value_parser = parse_k)]
    pub k: u32,
    /// Last node index; scientific notation accepted
    #[arg(long, value_parser = parse_count, required_unless_present = "decades")]
    pub n: Option<u64>,
    /// Run n = 10^LO..10^HI instead of a single n and print aggregates, e.g. `3..6`
    #[arg(long, value_parser = parse_range, conflicts_with = "n")]
    pub decades: Option<Range>,
    #[arg(long, default_value_t = ReplacementMode::With, value_parser = parse_mode)]
    pub mode: ReplacementMode,
    #[arg(long, default_value = "S", value_parser = parse_stats)]
    pub stats: StatSet,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub reps: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// jsonl record or flat csv
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// Also compare aggregates with the limit constants (exit 1 if an established one is off)
    #[arg(long)]
    pub compare: bool,
    #[arg(long, default_value_t = recdag::montecarlo::DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    /// Keep wall-clock time in the jsonl header (output then differs between runs)
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct TailcheckArgs {
    #[arg(long, default_value = "1e4", value_parser = parse_count)]
    pub n: u64,
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    pub reps: u64,
    /// Integer thresholds `LO..HI`; default ceil(ln n)..3 ceil(ln n)
    #[arg(long, value_parser = parse_range)]
    pub t: Option<Range>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct MinrcheckArgs {
    /// One or more sizes; the frequency must not fall (beyond 2 SE) as n grows
    #[arg(long, default_value = "1e2,1e3,1e4,1e5", value_delimiter = ',', value_parser = parse_count)]
    pub n: Vec<u64>,
    #[arg(long, default_value = "1000", value_parser = parse_count)]
    pub reps: u64,
    /// Required frequency at the largest n
    #[arg(long, default_value_t = 0.95)]
    pub min_freq: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct MaxrcheckArgs {
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    pub n: u64,
    #[arg(long, default_value = "50", value_parser = parse_count)]
    pub reps: u64,
    /// Window for the mean ratio (pilot-calibrated at n = 1e6)
    #[arg(long, default_value_t = 2.2)]
    pub lo: f64,
    #[arg(long, default_value_t = 2.9)]
    pub hi: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct BrwArgs {
    /// Tree depth
    #[arg(long, default_value = "20")]
    pub ell: u32,
    #[arg(long, default_value = "2", value_parser = parse_k)]
    pub k: u32,
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub reps: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct TailboundArgs {
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    /// Integer thresholds `LO..HI`; default ceil(ln n)..3 ceil(ln n)
    #[arg(long, value_parser = parse_range)]
    pub t: Option<Range>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct CompareArgs {
    /// Record written by `simulate --format jsonl`
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, default_value_t = recdag::montecarlo::DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Flatten to rep,stat,value_at_n,max_1_to_n,min_half_to_n
    #[arg(long, required = true)]
    pub csv: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Range {
    pub lo: u64,
    pub hi: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct KList(pub Vec<u32>);

/// Non-negative integer, plain or in scientific notation (`1e6`, `2.5e3`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number; write e.g. 1000 or 1e6"))?;
    if v.is_nan() || v < 0.0 || v.fract() != 0.0 || v > i64::MAX as f64 {
        return Err(format!("`{s}` is not a non-negative integer; write e.g. 1000 or 1e6"));
    }
    Ok(v as u64)
}

pub fn parse_k(s: &str) -> Result<u32, String> {
    let k = parse_count(s)?;
    if k < 1 || k > MAX_ARITY as u64 {
        return Err(format!("k must lie in 1..={MAX_ARITY}; try --k 2"));
    }
    Ok(k as u32)
}

pub fn parse_threads(s: &str) -> Result<usize, String> {
    match parse_count(s)? {
        0 => Err("need at least one thread; try --threads 1".into()),
        t => Ok(t as usize),
    }
}

pub fn parse_mode(s: &str) -> Result<ReplacementMode, String> {
    s.parse().map_err(|_| "expected `with` or `without`".to_string())
}

pub fn parse_stats(s: &str) -> Result<StatSet, String> {
    s.parse().map_err(|e: recdag::Error| format!("{e}; try --stats S,R,L"))
}

pub fn parse_range(s: &str) -> Result<Range, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("`{s}` is not a range; write LO..HI"))?;
    let (lo, hi) = (parse_count(lo)?, parse_count(hi)?);
    if lo > hi {
        return Err(format!("empty range `{s}`; write LO..HI with LO <= HI"));
    }
    Ok(Range { lo, hi })
}

pub fn parse_k_list(s: &str) -> Result<KList, String> {
    let mut ks = Vec::new();
    for part in s.split(',') {
        if part.contains("..") {
            let r = parse_range(part)?;
            for k in r.lo..=r.hi {
                ks.push(parse_k(&k.to_string())?);
            }
        } else {
            ks.push(parse_k(part)?);
        }
    }
    Ok(KList(ks))
}
