use std::fs::File;
use std::io::{self, BufWriter, Write};

use recdag::constants::{
    constants_table, format_csv, format_paper_table1, format_paper_table2, solve_sigma, CONJECTURED_COLUMNS,
    TABLE2_KS,
};
use recdag::graph_model::write_stream_dump;
use recdag::label_process::rn_tail_bound;
use recdag::montecarlo::{
    check_max_r, check_min_r, check_rn_tail, compare_to_constants, decades, estimate_brw, export_csv, load,
    run_experiment, run_schedule, write_record, write_record_untimed, Comparison, Variant,
};
use recdag::{compute_profiles, constants_row, summarize, DagSpec, ExperimentConfig};

use crate::args::*;

#[derive(Debug)]
pub enum Failure {
    /// Bad invocation: names the flag and suggests a fix. Exit 2.
    Usage { flag: &'static str, msg: String },
    /// A check ran and did not pass. Exit 1.
    Check(String),
    /// Anything else that stopped the run. Exit 1.
    Run(recdag::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage { .. } => 2,
            Failure::Check(_) | Failure::Run(_) => 1,
        }
    }
}

impl From<recdag::Error> for Failure {
    fn from(e: recdag::Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.into())
    }
}

fn usage(flag: &'static str, msg: impl Into<String>) -> Failure {
    Failure::Usage { flag, msg: msg.into() }
}

/// Core usage errors become flag-level errors for `flag`.
fn blame(flag: &'static str) -> impl Fn(recdag::Error) -> Failure {
    move |e| match e {
        recdag::Error::Usage(msg) | recdag::Error::Domain { msg, .. } => usage(flag, msg),
        other => Failure::Run(other),
    }
}

type Outcome = Result<(), Failure>;

fn sink(out: &OutArgs) -> Result<Box<dyn Write>, Failure> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn seed(s: Option<u64>) -> u64 {
    s.expect("seed resolved before dispatch")
}

fn default_thresholds(n: u64, t: Option<Range>) -> Vec<u64> {
    let r = t.unwrap_or_else(|| {
        let c = (n as f64).ln().ceil() as u64;
        Range { lo: c, hi: 3 * c }
    });
    (r.lo..=r.hi).collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

pub fn run(command: &Command, threads: Option<usize>) -> Outcome {
    match command {
        Command::Generate(a) => generate(a),
        Command::Stats(a) => stats(a),
        Command::Constants(a) => constants(a),
        Command::Simulate(a) => simulate(a, threads),
        Command::Tailcheck(a) => tailcheck(a, threads),
        Command::Minrcheck(a) => minrcheck(a, threads),
        Command::Maxrcheck(a) => maxrcheck(a, threads),
        Command::Brw(a) => brw(a, threads),
        Command::Tailbound(a) => tailbound(a),
        Command::Compare(a) => compare(a),
        Command::Export(a) => export(a),
    }
}

fn graph_spec(g: &GraphArgs) -> Result<DagSpec, Failure> {
    let spec = DagSpec::new(g.n, g.k, g.mode, seed(g.seed));
    spec.validate().map_err(blame("--n"))?;
    Ok(spec)
}

fn generate(a: &GenerateArgs) -> Outcome {
    let spec = graph_spec(&a.graph)?;
    write_stream_dump(&spec, sink(&a.out)?)?;
    Ok(())
}

fn stats(a: &StatsArgs) -> Outcome {
    let spec = graph_spec(&a.graph)?;
    let profile = compute_profiles(&spec, a.stats)?;
    profile.verify_sandwich()?;
    let mut out = sink(&a.out)?;
    match a.format {
        Format::Tsv => profile.write_tsv(&mut out)?,
        Format::Csv => {
            let s = summarize(&profile);
            writeln!(out, "stat,value_at_n,max_1_to_n,min_half_to_n")?;
            for stat in a.stats.iter() {
                let e = s.get(stat).unwrap();
                writeln!(out, "{stat},{},{},{}", e.value_at_n, e.max_1_to_n, e.min_half_to_n)?;
            }
        }
        Format::Jsonl => {
            let s = summarize(&profile);
            for stat in a.stats.iter() {
                let e = s.get(stat).unwrap();
                let line = serde_json::json!({
                    "stat": stat,
                    "n": s.n,
                    "value_at_n": e.value_at_n,
                    "max_1_to_n": e.max_1_to_n,
                    "min_half_to_n": e.min_half_to_n,
                });
                writeln!(out, "{line}")?;
            }
        }
        Format::PaperTable => return Err(usage("--format", "stats supports csv, jsonl or tsv; try --format csv")),
    }
    out.flush()?;
    Ok(())
}

fn constants(a: &ConstantsArgs) -> Outcome {
    let table = match (a.paper_table, a.format) {
        (Some(t), _) => Some(t),
        (None, Format::PaperTable) => Some(if a.k.as_ref().is_some_and(|k| k.0.len() > 1) { 2 } else { 1 }),
        _ => None,
    };
    let ks: Vec<u32> = match (&a.k, table) {
        (Some(k), _) => k.0.clone(),
        (None, Some(2)) => TABLE2_KS.to_vec(),
        (None, _) => vec![2],
    };
    if table == Some(1) && ks.len() != 1 {
        return Err(usage("--k", "table 1 takes a single k; try --k 2"));
    }
    let rows = constants_table(&ks).map_err(blame("--k"))?;
    let mut out = sink(&a.out)?;
    match (table, a.format) {
        (Some(1), _) => write!(out, "{}", format_paper_table1(&rows[0]))?,
        (Some(_), _) => write!(out, "{}", format_paper_table2(&rows))?,
        (None, Format::Csv) => write!(out, "{}", format_csv(&rows))?,
        (None, Format::Jsonl) => {
            for row in &rows {
                writeln!(out, "{}", serde_json::to_string(row).map_err(io::Error::from)?)?;
            }
        }
        (None, _) => return Err(usage("--format", "constants supports csv, jsonl or paper-table")),
    }
    out.flush()?;
    eprintln!("recdag: conjectured columns: {}", CONJECTURED_COLUMNS.join(", "));
    Ok(())
}

fn report_comparison(c: &Comparison) {
    eprintln!("recdag: comparison at k={} n={} (rel tol {})", c.k, c.n, c.rel_tol);
    for r in &c.rows {
        eprintln!(
            "  {:<7} {:<14} mean {:.4} +- {:.4}  limit {:<8} ratio {:<8}{}{}",
            r.stat.name(),
            r.variant.name(),
            r.empirical,
            r.se,
            r.constant.map_or("NA".into(), |v| format!("{v:.4}")),
            r.ratio.map_or("NA".into(), |v| format!("{v:.4}")),
            if r.conjectured { "  (conjectured)" } else { "" },
            if r.flagged { "  FLAGGED" } else { "" },
        );
    }
}

fn simulate(a: &SimulateArgs, threads: Option<usize>) -> Outcome {
    if a.reps < 1 {
        return Err(usage("--reps", "need at least one replication; try --reps 100"));
    }
    if a.rel_tol.is_nan() || a.rel_tol <= 0.0 {
        return Err(usage("--rel-tol", "must be positive; try --rel-tol 0.1"));
    }
    let mut config = ExperimentConfig::new(a.k, a.n.unwrap_or(2), a.stats, a.reps, seed(a.seed));
    config.mode = a.mode;
    config.compare = a.compare;
    config.output = a.out.out.clone();

    if let Some(d) = a.decades {
        if d.lo < 1 || d.hi > 18 {
            return Err(usage("--decades", "exponents must lie in 1..18; try --decades 3..6"));
        }
        let ns = decades(d.lo as u32, d.hi as u32);
        let records = run_schedule(&config, &ns, threads).map_err(blame("--decades"))?;
        let mut out = sink(&a.out)?;
        match a.format {
            Format::Csv => {
                writeln!(out, "n,stat,variant,count,mean,se,median,q05,q95")?;
                for rec in &records {
                    for g in &rec.aggregates {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{}",
                            rec.config.n,
                            g.stat,
                            g.variant.name(),
                            g.count,
                            g.mean,
                            g.se,
                            g.median,
                            g.q05,
                            g.q95
                        )?;
                    }
                }
            }
            Format::Jsonl => {
                for rec in &records {
                    for g in &rec.aggregates {
                        let line = serde_json::json!({ "n": rec.config.n, "aggregate": g });
                        writeln!(out, "{line}")?;
                    }
                }
            }
            _ => return Err(usage("--format", "simulate supports jsonl or csv")),
        }
        out.flush()?;
        let mut ok = true;
        if a.compare {
            let row = constants_row(a.k)?;
            for rec in &records {
                let c = compare_to_constants(rec, &row, a.rel_tol)?;
                report_comparison(&c);
                ok &= c.established_ok();
            }
        }
        return if ok { Ok(()) } else { Err(Failure::Check("established limits flagged".into())) };
    }

    if a.n.is_some_and(|n| n < 2) {
        return Err(usage("--n", "n must be at least 2; try --n 1000"));
    }
    let record = run_experiment(&config, threads).map_err(blame("--n"))?;
    eprintln!("recdag: {} replications in {:.3} s", record.summaries.len(), record.wall_clock_secs);
    let mut out = sink(&a.out)?;
    match (a.format, a.timing) {
        (Format::Jsonl, true) => write_record(&record, &mut out)?,
        (Format::Jsonl, false) => write_record_untimed(&record, &mut out)?,
        (Format::Csv, _) => export_csv(&record, &mut out)?,
        _ => return Err(usage("--format", "simulate supports jsonl or csv")),
    }
    out.flush()?;
    for g in &record.aggregates {
        if g.variant == Variant::ValueAtN {
            eprintln!("recdag: mean {}/ln n = {:.4} +- {:.4}", g.stat, g.mean, g.se);
        }
    }
    if a.compare {
        let c = compare_to_constants(&record, &constants_row(a.k)?, a.rel_tol)?;
        report_comparison(&c);
        if !c.established_ok() {
            return Err(Failure::Check("established limits flagged".into()));
        }
    }
    Ok(())
}

fn tailcheck(a: &TailcheckArgs, threads: Option<usize>) -> Outcome {
    if a.n < 2 {
        return Err(usage("--n", "n must be at least 2; try --n 1e4"));
    }
    if a.reps < 1 {
        return Err(usage("--reps", "need at least one replication; try --reps 1e5"));
    }
    let ts = default_thresholds(a.n, a.t);
    let check = check_rn_tail(a.n, a.reps, &ts, seed(a.seed), threads).map_err(blame("--t"))?;
    let mut out = sink(&a.out)?;
    writeln!(out, "t,frequency,bound,se,pass")?;
    for r in &check.rows {
        writeln!(out, "{},{},{},{},{}", r.t, r.frequency, r.bound, r.se, r.pass)?;
    }
    out.flush()?;
    if check.passed() {
        Ok(())
    } else {
        Err(Failure::Check("empirical tail exceeds the bound".into()))
    }
}

fn minrcheck(a: &MinrcheckArgs, threads: Option<usize>) -> Outcome {
    if let Some(&n) = a.n.iter().find(|&&n| n < 4) {
        return Err(usage("--n", format!("n = {n} is below 4; try --n 1e3,1e4")));
    }
    if a.reps < 1 {
        return Err(usage("--reps", "need at least one replication; try --reps 1000"));
    }
    let mut ns = a.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let checks = ns
        .iter()
        .map(|&n| check_min_r(n, a.reps, seed(a.seed), threads))
        .collect::<recdag::Result<Vec<_>>>()?;
    let mut out = sink(&a.out)?;
    writeln!(out, "n,reps,hits,frequency,se")?;
    for c in &checks {
        writeln!(out, "{},{},{},{},{}", c.n, c.reps, c.hits, c.frequency, c.se)?;
    }
    out.flush()?;
    let last = checks.last().unwrap();
    if last.frequency < a.min_freq {
        return Err(Failure::Check(format!(
            "frequency {} at n={} is below {}",
            last.frequency, last.n, a.min_freq
        )));
    }
    for w in checks.windows(2) {
        let slack = 2.0 * (w[0].se.powi(2) + w[1].se.powi(2)).sqrt();
        if w[1].frequency < w[0].frequency - slack {
            return Err(Failure::Check(format!("frequency falls between n={} and n={}", w[0].n, w[1].n)));
        }
    }
    Ok(())
}

fn maxrcheck(a: &MaxrcheckArgs, threads: Option<usize>) -> Outcome {
    if a.n < 10 {
        return Err(usage("--n", "n must be at least 10; try --n 1e6"));
    }
    if a.reps < 1 {
        return Err(usage("--reps", "need at least one replication; try --reps 50"));
    }
    let c = check_max_r(a.n, a.reps, seed(a.seed), threads)?;
    let pass = c.within(a.lo, a.hi);
    let mut out = sink(&a.out)?;
    writeln!(out, "n,reps,mean,se,sd,lo,hi,pass")?;
    writeln!(out, "{},{},{},{},{},{},{},{}", c.n, c.reps, c.mean, c.se, c.sd, a.lo, a.hi, pass)?;
    out.flush()?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check(format!("mean ratio {} outside [{}, {}]", c.mean, a.lo, a.hi)))
    }
}

fn brw(a: &BrwArgs, threads: Option<usize>) -> Outcome {
    if a.ell < 1 {
        return Err(usage("--ell", "depth must be at least 1; try --ell 20"));
    }
    if a.reps < 2 {
        return Err(usage("--reps", "need at least two samples; try --reps 200"));
    }
    let est = estimate_brw(a.ell, a.k, a.reps, seed(a.seed), threads).map_err(blame("--ell"))?;
    let mut out = sink(&a.out)?;
    writeln!(out, "ell,k,rep,value")?;
    for (rep, v) in est.values.iter().enumerate() {
        writeln!(out, "{},{},{rep},{v}", a.ell, a.k)?;
    }
    out.flush()?;
    let (m, se) = est.per_step();
    let target = 1.0 / solve_sigma(a.k)?;
    eprintln!("recdag: mean/ell = {m:.4} +- {se:.4}; 1/sigma = {target:.4}; ratio {:.4}", m / target);
    Ok(())
}

fn tailbound(a: &TailboundArgs) -> Outcome {
    if a.n < 2 {
        return Err(usage("--n", "n must be at least 2; try --n 1e4"));
    }
    let ts = default_thresholds(a.n, a.t);
    let mut out = sink(&a.out)?;
    writeln!(out, "n,t,bound")?;
    for t in ts {
        let b = rn_tail_bound(a.n, t).map_err(blame("--t"))?;
        writeln!(out, "{},{t},{b}", a.n)?;
    }
    out.flush()?;
    Ok(())
}

fn compare(a: &CompareArgs) -> Outcome {
    let record = load(&a.input)?;
    let c = compare_to_constants(&record, &constants_row(record.config.k)?, a.rel_tol)?;
    let mut out = sink(&a.out)?;
    writeln!(out, "stat,variant,empirical,se,constant,ratio,conjectured,flagged")?;
    for r in &c.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.stat,
            r.variant.name(),
            r.empirical,
            r.se,
            fmt_opt(r.constant),
            fmt_opt(r.ratio),
            r.conjectured,
            r.flagged
        )?;
    }
    out.flush()?;
    if c.established_ok() {
        Ok(())
    } else {
        Err(Failure::Check("established limits flagged".into()))
    }
}

fn export(a: &ExportArgs) -> Outcome {
    let record = load(&a.input)?;
    let mut out = sink(&a.out)?;
    export_csv(&record, &mut out)?;
    Ok(())
}

