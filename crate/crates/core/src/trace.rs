//! Per-iteration run records and their CSV form.
//!
//! Trace CSV columns: `iteration,best_fitness,diversity,evaluations`, one row
//! per completed iteration, reals written with 17 significant digits.
//! Position snapshots go to a sibling directory `<trace stem>_snapshots/`
//! holding `bounds.csv` (`lower,upper` per dimension) and one
//! `iter_<t>.csv` per snapshot (`agent,x0,x1,...`).

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::AlgorithmKind;
use crate::error::{Error, Result};
use crate::population::Best;
use crate::space::SearchSpace;

pub const TRACE_HEADER: &str = "iteration,best_fitness,diversity,evaluations";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub best_fitness: f64,
    pub diversity: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub iteration: usize,
    pub positions: Vec<Vec<f64>>,
}

/// A parameter value injected by stochastic control before iteration `iteration`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlEvent {
    pub iteration: usize,
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub algorithm: AlgorithmKind,
    pub records: Vec<TraceRecord>,
    pub snapshots: Vec<Snapshot>,
    pub controls: Vec<ControlEvent>,
    pub best: Best,
    pub final_positions: Vec<Vec<f64>>,
}

impl Trace {
    pub fn best_fitness(&self) -> f64 {
        self.best.fitness
    }

    pub fn evaluations(&self) -> u64 {
        self.records.last().map_or(0, |r| r.evaluations)
    }

    /// First iteration whose best fitness is at or below `threshold`.
    pub fn iterations_to(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.best_fitness <= threshold)
            .map(|r| r.iteration)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = CsvTraceWriter::new(out)?;
        for r in &self.records {
            w.record(r)?;
        }
        w.finish()
    }

    pub fn write_snapshots(&self, trace_path: &Path, space: &SearchSpace) -> Result<()> {
        if self.snapshots.is_empty() {
            return Ok(());
        }
        let dir = snapshot_dir(trace_path);
        fs::create_dir_all(&dir)?;
        let mut bounds = BufWriter::new(fs::File::create(dir.join("bounds.csv"))?);
        writeln!(bounds, "lower,upper")?;
        for (lo, hi) in space.lower().iter().zip(space.upper()) {
            writeln!(bounds, "{},{}", fmt_real(*lo), fmt_real(*hi))?;
        }
        bounds.flush()?;
        for snap in &self.snapshots {
            let mut w = BufWriter::new(fs::File::create(
                dir.join(format!("iter_{:08}.csv", snap.iteration)),
            )?);
            let d = snap.positions.first().map_or(0, Vec::len);
            let cols: Vec<String> = (0..d).map(|k| format!("x{k}")).collect();
            writeln!(w, "agent,{}", cols.join(","))?;
            for (i, p) in snap.positions.iter().enumerate() {
                let vals: Vec<String> = p.iter().map(|v| fmt_real(*v)).collect();
                writeln!(w, "{i},{}", vals.join(","))?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

/// Directory holding the position snapshots that belong to a trace file.
pub fn snapshot_dir(trace_path: &Path) -> PathBuf {
    let stem = trace_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".into());
    trace_path.with_file_name(format!("{stem}_snapshots"))
}

/// Full-precision real formatting used in every CSV this crate writes.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Receives trace records as iterations complete.
pub trait TraceSink {
    fn record(&mut self, record: &TraceRecord) -> Result<()>;
}

impl TraceSink for Vec<TraceRecord> {
    fn record(&mut self, record: &TraceRecord) -> Result<()> {
        self.push(*record);
        Ok(())
    }
}

/// Streams records to CSV as they arrive; rows are only ever appended.
pub struct CsvTraceWriter<W: Write> {
    out: BufWriter<W>,
}

impl<W: Write> CsvTraceWriter<W> {
    pub fn new(out: W) -> Result<Self> {
        let mut out = BufWriter::new(out);
        writeln!(out, "{TRACE_HEADER}")?;
        Ok(Self { out })
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(Error::from)
    }
}

impl<W: Write> TraceSink for CsvTraceWriter<W> {
    fn record(&mut self, r: &TraceRecord) -> Result<()> {
        writeln!(
            self.out,
            "{},{},{},{}",
            r.iteration,
            fmt_real(r.best_fitness),
            fmt_real(r.diversity),
            r.evaluations
        )?;
        Ok(())
    }
}

/// Parse a trace CSV back into records.
pub fn read_trace_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == TRACE_HEADER => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "trace header must be `{TRACE_HEADER}`, found {other:?}"
            )))
        }
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(row, line)| {
            let bad =
                || Error::InvalidArgument(format!("malformed trace row {}: `{line}`", row + 1));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad());
            }
            Ok(TraceRecord {
                iteration: f[0].trim().parse().map_err(|_| bad())?,
                best_fitness: f[1].trim().parse().map_err(|_| bad())?,
                diversity: f[2].trim().parse().map_err(|_| bad())?,
                evaluations: f[3].trim().parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

fn parse_reals(line: &str, what: &str) -> Result<Vec<f64>> {
    line.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("malformed {what} row: `{line}`")))
        })
        .collect()
}

/// Read back the snapshot directory written by [`Trace::write_snapshots`].
///
/// Returns the search space and the snapshots in iteration order.
pub fn read_snapshots(trace_path: &Path) -> Result<(SearchSpace, Vec<Snapshot>)> {
    let dir = snapshot_dir(trace_path);
    let bounds = fs::read_to_string(dir.join("bounds.csv"))
        .map_err(|e| Error::Io(format!("{}: {e}", dir.join("bounds.csv").display())))?;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for line in bounds.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let v = parse_reals(line, "bounds")?;
        if v.len() != 2 {
            return Err(Error::InvalidArgument(format!(
                "malformed bounds row: `{line}`"
            )));
        }
        lower.push(v[0]);
        upper.push(v[1]);
    }
    let space = SearchSpace::new(lower, upper)?;

    let mut files: Vec<(usize, PathBuf)> = Vec::new();
    for entry in fs::read_dir(&dir)? {
        let path = entry?.path();
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        if let Some(t) = name
            .strip_prefix("iter_")
            .and_then(|r| r.strip_suffix(".csv"))
            .and_then(|t| t.parse().ok())
        {
            files.push((t, path));
        }
    }
    files.sort();
    let mut snapshots = Vec::with_capacity(files.len());
    for (iteration, path) in files {
        let text = fs::read_to_string(&path)?;
        let mut positions = Vec::new();
        for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
            let mut v = parse_reals(line, "snapshot")?;
            if v.len() != space.dim() + 1 {
                return Err(Error::InvalidArgument(format!(
                    "{}: expected {} columns, found {}",
                    path.display(),
                    space.dim() + 1,
                    v.len()
                )));
            }
            v.remove(0);
            positions.push(v);
        }
        snapshots.push(Snapshot {
            iteration,
            positions,
        });
    }
    Ok((space, snapshots))
}
