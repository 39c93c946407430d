//! Tab-separated dag dumps: a `# recdag n=.. k=.. mode=.. seed=..` header,
//! then one line per node, `node<TAB>parent_1<TAB>...<TAB>parent_k`.

use std::io::{BufRead, Write};
use std::ops::ControlFlow;

use super::{DagSpec, KDag};
use crate::error::{Error, Result};

fn write_header<W: Write>(spec: &DagSpec, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "# recdag n={} k={} mode={} seed={}",
        spec.n, spec.k, spec.mode, spec.seed
    )?;
    Ok(())
}

fn write_row<W: Write>(out: &mut W, node: u64, parents: &[u64]) -> std::io::Result<()> {
    write!(out, "{node}")?;
    for p in parents {
        write!(out, "\t{p}")?;
    }
    writeln!(out)
}

pub fn write_dump<W: Write>(dag: &KDag, mut out: W) -> Result<()> {
    let spec = dag.spec();
    write_header(spec, &mut out)?;
    let mut buf = vec![0u64; spec.k as usize];
    for node in 1..=spec.n {
        dag.parents_into(node, &mut buf);
        write_row(&mut out, node, &buf)?;
    }
    out.flush()?;
    Ok(())
}

/// Same text as [`write_dump`] without holding the parent table.
pub fn write_stream_dump<W: Write>(spec: &DagSpec, mut out: W) -> Result<()> {
    spec.validate()?;
    write_header(spec, &mut out)?;
    let mut failure = None;
    let streamed = spec.stream(|node, parents| match write_row(&mut out, node, parents) {
        Ok(()) => ControlFlow::Continue(()),
        Err(e) => {
            failure = Some(e);
            ControlFlow::Break(())
        }
    });
    if let Some(e) = failure {
        return Err(e.into());
    }
    streamed?;
    out.flush()?;
    Ok(())
}

fn parse_header(line: &str) -> Result<DagSpec> {
    let bad = |msg: &str| Error::Parse {
        line: 1,
        msg: msg.to_string(),
    };
    let rest = line
        .strip_prefix("# recdag ")
        .ok_or_else(|| bad("expected header `# recdag n=<n> k=<k> mode=<mode> seed=<seed>`"))?;
    let (mut n, mut k, mut mode, mut seed) = (None, None, None, None);
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad(&format!("malformed header field `{field}`")))?;
        let num = |v: &str| v.parse::<u64>().map_err(|e| bad(&format!("{key}: {e}")));
        match key {
            "n" => n = Some(num(value)?),
            "k" => k = Some(num(value)? as u32),
            "mode" => mode = Some(value.parse().map_err(|e: Error| bad(&e.to_string()))?),
            "seed" => seed = Some(num(value)?),
            _ => return Err(bad(&format!("unknown header field `{key}`"))),
        }
    }
    match (n, k, mode, seed) {
        (Some(n), Some(k), Some(mode), Some(seed)) => Ok(DagSpec { n, k, mode, seed }),
        _ => Err(bad("header must name n, k, mode and seed")),
    }
}

/// Parse a dump produced by [`write_dump`].
pub fn read_dump<R: BufRead>(input: R) -> Result<KDag> {
    let mut lines = input.lines();
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty dump".into(),
    })??;
    let spec = parse_header(header.trim_end())?;
    spec.validate().map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<u64> = line
            .split('\t')
            .map(|f| f.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
        let expected = rows.len() as u64 + 1;
        if fields.first() != Some(&expected) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected node {expected}"),
            });
        }
        rows.push(fields[1..].to_vec());
    }
    KDag::from_rows(spec, &rows).map_err(|e| Error::Parse {
        line: rows.len() + 1,
        msg: e.to_string(),
    })
}
