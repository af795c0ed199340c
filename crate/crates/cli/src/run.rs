//! The `run` and `sweep` commands.

use std::collections::HashSet;
use std::fs;
use std::time::Instant;

use sce_core::{
    clustering_accuracy, co_association, eac_single_link, generate_gaussian_mixture, generate_pool,
    kmeans_best_of, load_csv, run_sce, Dataset, EnsembleTrace, Partition, Seeding,
};
use serde::Serialize;

use crate::args::{Baseline, CommonArgs};
use crate::config::{DataSource, EffectiveConfig, RunConfig};
use crate::error::{CliError, Result};
use crate::{plot, report};

pub const RESULT_FILE: &str = "result.json-lines";
pub const TRACE_FILE: &str = "trace.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const CONVERGENCE_PLOT: &str = "convergence.svg";
pub const RELERR_PLOT: &str = "relerr.svg";

pub struct Loaded {
    pub dataset: Dataset,
    pub labels: Option<Vec<usize>>,
}

pub fn load_source(source: &DataSource) -> Result<Loaded> {
    match source {
        DataSource::Csv(path) => {
            let l = load_csv(path).map_err(CliError::Input)?;
            Ok(Loaded {
                dataset: l.dataset,
                labels: l.labels,
            })
        }
        DataSource::Generator { spec, seed } => {
            let (dataset, labels) =
                generate_gaussian_mixture(&spec.0, *seed).map_err(CliError::Input)?;
            Ok(Loaded {
                dataset,
                labels: Some(labels),
            })
        }
    }
}

/// One line of `result.json-lines`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodRecord {
    pub method: String,
    pub k: usize,
    pub mssc: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ac: Option<f64>,
    pub seconds: Option<f64>,
    pub iterations: usize,
    pub config: EffectiveConfig,
}

pub struct RunOutcome {
    pub records: Vec<MethodRecord>,
    pub trace: Option<EnsembleTrace>,
    pub errors: Vec<CliError>,
}

impl RunOutcome {
    pub fn record(&self, method: &str) -> Option<&MethodRecord> {
        self.records.iter().find(|r| r.method == method)
    }
}

pub fn method_name(b: Baseline, restarts: usize) -> String {
    match b {
        Baseline::KMeans => format!("kmeans_best_of_{restarts}"),
        Baseline::KMeansPp => format!("kmeans_pp_best_of_{restarts}"),
        Baseline::Eac => "eac".into(),
    }
}

/// Runs the ensemble and every requested baseline; failures are collected
/// rather than aborting the remaining methods.
pub fn execute(cfg: &RunConfig, data: &Loaded) -> RunOutcome {
    let ds = &data.dataset;
    let k = cfg.k();
    let effective = cfg.effective();
    let mut out = RunOutcome {
        records: Vec::new(),
        trace: None,
        errors: Vec::new(),
    };
    let push = |out: &mut RunOutcome, method: String, p: &Partition, t: Instant, iterations: usize| {
        let ac = data
            .labels
            .as_deref()
            .map(|l| clustering_accuracy(p, l))
            .transpose();
        match ac {
            Ok(ac) => out.records.push(MethodRecord {
                method,
                k,
                mssc: p.mssc(),
                ac,
                seconds: cfg.timings.then(|| t.elapsed().as_secs_f64()),
                iterations,
                config: effective.clone(),
            }),
            Err(e) => out.errors.push(CliError::method(method, e)),
        }
    };

    let t = Instant::now();
    match run_sce(ds, &cfg.pool, &cfg.ensemble) {
        Ok((p, trace)) => {
            log::info!("sce: mssc {:.6e} after {} iterations", p.mssc(), trace.records.len());
            push(&mut out, "sce".into(), &p, t, trace.records.len());
            out.trace = Some(trace);
        }
        Err(e) => out.errors.push(CliError::method("sce", e)),
    }

    for &b in &cfg.baselines {
        let name = method_name(b, cfg.restarts);
        let t = Instant::now();
        let result = match b {
            Baseline::KMeans | Baseline::KMeansPp => {
                let seeding = if b == Baseline::KMeans {
                    Seeding::Forgy
                } else {
                    Seeding::KMeansPlusPlus
                };
                kmeans_best_of(
                    ds,
                    k,
                    cfg.restarts,
                    seeding,
                    cfg.ensemble.kmeans_max_iters,
                    cfg.pool.rng_seed,
                )
                .map(|r| (r.partition, r.iterations))
            }
            Baseline::Eac => generate_pool(ds, &cfg.pool).and_then(|(_, parts)| {
                let refs: Vec<&Partition> = parts.iter().collect();
                let s = co_association(&refs)?;
                Ok((eac_single_link(&s, ds, k)?, 0))
            }),
        };
        match result {
            Ok((p, iterations)) => {
                log::info!("{name}: mssc {:.6e}", p.mssc());
                push(&mut out, name, &p, t, iterations);
            }
            Err(e) => out.errors.push(CliError::method(name, e)),
        }
    }
    out
}

fn write_outputs(cfg: &RunConfig, outcome: &RunOutcome) -> Result<()> {
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::output(&cfg.out, e))?;
    report::write_records(&cfg.out.join(RESULT_FILE), &outcome.records)?;
    if let Some(trace) = &outcome.trace {
        report::write_trace(&cfg.out.join(TRACE_FILE), trace, cfg.timings)?;
        if cfg.plots {
            plot::convergence(&cfg.out.join(CONVERGENCE_PLOT), trace)?;
        }
    }
    if cfg.plots {
        if let Some(sce) = outcome.record("sce") {
            let bars: Vec<(String, f64)> = outcome
                .records
                .iter()
                .filter(|r| r.method != "sce" && r.mssc > 0.0)
                .map(|r| (r.method.clone(), report::sce_gain(sce.mssc, r.mssc)))
                .collect();
            plot::relerr_bars(&cfg.out.join(RELERR_PLOT), &bars)?;
        }
    }
    Ok(())
}

fn finish(outcome: RunOutcome) -> Result<RunOutcome> {
    let mut outcome = outcome;
    if outcome.errors.is_empty() {
        Ok(outcome)
    } else {
        for e in &outcome.errors[1..] {
            log::error!("{e}");
        }
        Err(outcome.errors.swap_remove(0))
    }
}

/// Loads the data, runs every method and writes the result files. Records of
/// the methods that succeeded are written even when another one failed.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutcome> {
    let data = load_source(&cfg.source)?;
    let outcome = execute(cfg, &data);
    write_outputs(cfg, &outcome)?;
    finish(outcome)
}

/// Runs once per k, each into `<out>/k<k>/`, and tabulates every method in
/// `<out>/sweep.csv`.
pub fn cmd_sweep(args: &CommonArgs, k_list: &[usize]) -> Result<Vec<RunOutcome>> {
    if k_list.is_empty() {
        return Err(CliError::Usage("the k list is empty".into()));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = k_list.iter().find(|k| !seen.insert(**k)) {
        return Err(CliError::Usage(format!("k = {dup} listed twice")));
    }
    let configs = k_list
        .iter()
        .map(|&k| {
            let mut cfg = RunConfig::from_args(k, args)?;
            cfg.out = args.out.join(format!("k{k}"));
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let data = load_source(&configs[0].source)?;
    let mut outcomes = Vec::new();
    let mut errors = Vec::new();
    for cfg in &configs {
        let mut outcome = execute(cfg, &data);
        write_outputs(cfg, &outcome)?;
        errors.append(&mut outcome.errors);
        outcomes.push(outcome);
    }
    let timings = !args.no_timings;
    report::write_sweep(&args.out.join(SWEEP_FILE), &outcomes, timings)?;
    if args.plots {
        plot::relerr_sweep(&args.out.join(RELERR_PLOT), &outcomes)?;
    }
    finish(RunOutcome {
        records: Vec::new(),
        trace: None,
        errors,
    })
    .map(|_| outcomes)
}
