//! Line-oriented record files.
//!
//! Line 1 is a JSON header carrying the format version, build identifiers,
//! wall-clock and the config. Every further line is one flat JSON object per
//! replication:
//!
//! ```text
//! {"format":"recdag-record","version":1,...,"config":{"k":2,"n":1000,...}}
//! {"S.max_1_to_n":7,"S.min_half_to_n":2,"S.value_at_n":5,"n":1000,"rep":0}
//! ```
//!
//! Aggregates are not stored; they are recomputed on load.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{ExperimentConfig, ExperimentRecord, Variant};
use crate::error::{Error, Result};
use crate::path_stats::{ParamSummary, Stat, StatSummary};

pub const FORMAT_VERSION: u32 = 1;
const FORMAT_TAG: &str = "recdag-record";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    artifact_version: String,
    generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wall_clock_secs: Option<f64>,
    config: ExperimentConfig,
}

fn summary_line(rep: usize, s: &ParamSummary) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("rep".into(), rep.into());
    obj.insert("n".into(), s.n.into());
    for stat in Stat::ALL {
        if let Some(e) = s.get(stat) {
            for v in Variant::ALL {
                obj.insert(format!("{}.{}", stat.name(), v.name()), v.pick(e).into());
            }
        }
    }
    obj
}

pub fn write_record<W: Write>(record: &ExperimentRecord, out: W) -> Result<()> {
    write_lines(record, Some(record.wall_clock_secs), out)
}

/// [`write_record`] without the wall-clock field, so equal configs give
/// byte-identical files. Such files load with `wall_clock_secs == 0`.
pub fn write_record_untimed<W: Write>(record: &ExperimentRecord, out: W) -> Result<()> {
    write_lines(record, None, out)
}

fn write_lines<W: Write>(record: &ExperimentRecord, wall_clock_secs: Option<f64>, mut out: W) -> Result<()> {
    let header = Header {
        format: FORMAT_TAG.into(),
        version: FORMAT_VERSION,
        artifact_version: record.artifact_version.clone(),
        generator: record.generator.clone(),
        wall_clock_secs,
        config: record.config.clone(),
    };
    serde_json::to_writer(&mut out, &header).map_err(std::io::Error::from)?;
    writeln!(out)?;
    for (rep, s) in record.summaries.iter().enumerate() {
        serde_json::to_writer(&mut out, &summary_line(rep, s)).map_err(std::io::Error::from)?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn parse_summary(line: usize, expected_rep: usize, obj: &Map<String, Value>) -> Result<ParamSummary> {
    let err = |msg: String| Error::Parse { line, msg };
    let uint = |key: &str| -> Result<u64> {
        obj.get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| err(format!("missing or non-integer field `{key}`")))
    };
    let rep = uint("rep")? as usize;
    if rep != expected_rep {
        return Err(err(format!("expected rep {expected_rep}, found {rep}")));
    }
    let n = uint("n")?;
    let mut entries = [None; 5];
    for stat in Stat::ALL {
        let keys = Variant::ALL.map(|v| format!("{}.{}", stat.name(), v.name()));
        let present = keys.iter().filter(|k| obj.contains_key(k.as_str())).count();
        match present {
            0 => {}
            3 => {
                let get = |i: usize| -> Result<u32> {
                    u32::try_from(uint(&keys[i])?).map_err(|_| err(format!("`{}` out of range", keys[i])))
                };
                entries[stat as usize] = Some(StatSummary {
                    value_at_n: get(0)?,
                    max_1_to_n: get(1)?,
                    min_half_to_n: get(2)?,
                });
            }
            _ => return Err(err(format!("incomplete fields for statistic {stat}"))),
        }
    }
    Ok(ParamSummary { n, entries })
}

pub fn read_record<R: BufRead>(input: R) -> Result<ExperimentRecord> {
    let mut lines = input.lines();
    let first = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty record file".into(),
    })??;
    let raw: Value = serde_json::from_str(&first).map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    if raw.get("format").and_then(Value::as_str) != Some(FORMAT_TAG) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("not a {FORMAT_TAG} file"),
        });
    }
    let version = raw.get("version").and_then(Value::as_u64).unwrap_or(0) as u32;
    if version > FORMAT_VERSION {
        return Err(Error::Version {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let header: Header = serde_json::from_value(raw).map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    let mut summaries = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let obj: Map<String, Value> = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        summaries.push(parse_summary(lineno, summaries.len(), &obj)?);
    }
    let mut record = ExperimentRecord::assemble(header.config, summaries, header.wall_clock_secs.unwrap_or(0.0));
    record.artifact_version = header.artifact_version;
    record.generator = header.generator;
    Ok(record)
}

pub fn persist(record: &ExperimentRecord, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    write_record(record, BufWriter::new(file))
}

pub fn load(path: &Path) -> Result<ExperimentRecord> {
    let mut record = read_record(BufReader::new(File::open(path)?))?;
    record.config.output = Some(path.to_path_buf());
    Ok(record)
}

/// Flatten to `rep,stat,value_at_n,max_1_to_n,min_half_to_n`.
pub fn export_csv<W: Write>(record: &ExperimentRecord, mut out: W) -> Result<()> {
    writeln!(out, "rep,stat,value_at_n,max_1_to_n,min_half_to_n")?;
    for (rep, s) in record.summaries.iter().enumerate() {
        for stat in Stat::ALL {
            if let Some(e) = s.get(stat) {
                writeln!(out, "{rep},{stat},{},{},{}", e.value_at_n, e.max_1_to_n, e.min_half_to_n)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
