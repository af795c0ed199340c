//! Tabular and line-delimited output files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use sce_core::{relative_error, EnsembleTrace};

use crate::error::{CliError, Result};
use crate::run::{MethodRecord, RunOutcome};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::output(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Percentage by which the ensemble improves on a baseline MSSC.
pub fn sce_gain(sce_mssc: f64, baseline_mssc: f64) -> f64 {
    relative_error(sce_mssc, baseline_mssc).unwrap_or(f64::NAN)
}

pub fn write_records(path: &Path, records: &[MethodRecord]) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| CliError::output(path, e);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| io(e.into()))?;
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn write_trace(path: &Path, trace: &EnsembleTrace, timings: bool) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| CliError::output(path, e);
    writeln!(w, "iter,mssc,q,objective,eta_used,seconds").map_err(io)?;
    for r in &trace.records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.iter,
            r.mssc,
            r.q,
            r.objective,
            r.eta_used,
            opt(timings.then_some(r.seconds))
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// One row per (k, method). `sce_gain` is the relative error of the ensemble
/// against that row's method, in percent.
pub fn write_sweep(path: &Path, outcomes: &[RunOutcome], timings: bool) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| CliError::output(path, e);
    writeln!(w, "k,method,mssc,ac,seconds,iterations,sce_gain").map_err(io)?;
    for o in outcomes {
        let sce = o.record("sce").map(|r| r.mssc);
        for r in &o.records {
            let gain = match sce {
                Some(s) if r.method != "sce" && r.mssc > 0.0 => Some(sce_gain(s, r.mssc)),
                _ => None,
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.k,
                r.method,
                r.mssc,
                opt(r.ac),
                opt(r.seconds.filter(|_| timings)),
                r.iterations,
                opt(gain)
            )
            .map_err(io)?;
        }
    }
    w.flush().map_err(io)
}
