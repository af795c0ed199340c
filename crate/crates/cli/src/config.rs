//! Resolved run configuration.

use std::path::PathBuf;

use sce_core::{EnsembleConfig, PoolConfig};
use serde::Serialize;

use crate::args::{Baseline, CommonArgs, GenSpec};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv(PathBuf),
    Generator { spec: GenSpec, seed: u64 },
}

impl std::fmt::Display for DataSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Csv(p) => write!(f, "{}", p.display()),
            Self::Generator { spec, .. } => write!(f, "{spec}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: DataSource,
    pub pool: PoolConfig,
    pub ensemble: EnsembleConfig,
    pub baselines: Vec<Baseline>,
    pub restarts: usize,
    pub out: PathBuf,
    pub plots: bool,
    pub timings: bool,
}

/// Every knob of a run with defaults resolved, embedded in each output record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveConfig {
    pub data: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gen_seed: Option<u64>,
    pub k: usize,
    pub m_partitions: usize,
    pub tau: usize,
    pub seed: u64,
    pub beta: f64,
    pub eta_scale: f64,
    pub omega: usize,
    pub rel_err_stop: f64,
    pub max_outer_iters: usize,
    pub kmeans_max_iters: usize,
    pub cost: String,
    pub restarts: usize,
    pub baselines: Vec<String>,
    pub solver_tol: f64,
    pub solver_max_iters: usize,
}

pub fn baseline_name(b: Baseline) -> &'static str {
    match b {
        Baseline::KMeans => "kmeans",
        Baseline::KMeansPp => "kmeans_pp",
        Baseline::Eac => "eac",
    }
}

impl RunConfig {
    pub fn from_args(k: usize, args: &CommonArgs) -> Result<Self> {
        let source = match (&args.data, args.gen) {
            (Some(p), None) => DataSource::Csv(p.clone()),
            (None, Some(spec)) => DataSource::Generator {
                spec,
                seed: args.gen_seed,
            },
            _ => return Err(CliError::Usage("give exactly one of --data and --gen".into())),
        };
        let mut pool = PoolConfig::new(k, args.seed);
        pool.m_partitions = args.m;
        if let Some(tau) = args.tau {
            pool.tau = tau;
        }
        let ensemble = EnsembleConfig {
            beta: args.beta,
            eta_scale: args.eta_scale,
            omega: args.omega,
            rel_err_stop: args.rel_err_stop,
            max_outer_iters: args.max_iters,
            kmeans_max_iters: args.kmeans_max_iters,
            cost: args.cost,
            ..EnsembleConfig::default()
        };
        let cfg = Self {
            source,
            pool,
            ensemble,
            baselines: args.baselines.clone(),
            restarts: args.restarts,
            out: args.out.clone(),
            plots: args.plots,
            timings: !args.no_timings,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |e: sce_core::SceError| CliError::Usage(e.to_string());
        self.pool.validate().map_err(usage)?;
        self.ensemble.validate().map_err(usage)?;
        if self.restarts == 0 {
            return Err(CliError::Usage("restarts must be at least 1".into()));
        }
        for (i, b) in self.baselines.iter().enumerate() {
            if self.baselines[..i].contains(b) {
                return Err(CliError::Usage(format!(
                    "baseline `{}` listed twice",
                    baseline_name(*b)
                )));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.pool.k
    }

    pub fn effective(&self) -> EffectiveConfig {
        EffectiveConfig {
            data: self.source.to_string(),
            gen_seed: match self.source {
                DataSource::Generator { seed, .. } => Some(seed),
                DataSource::Csv(_) => None,
            },
            k: self.pool.k,
            m_partitions: self.pool.m_partitions,
            tau: self.pool.tau,
            seed: self.pool.rng_seed,
            beta: self.ensemble.beta,
            eta_scale: self.ensemble.eta_scale,
            omega: self.ensemble.omega,
            rel_err_stop: self.ensemble.rel_err_stop,
            max_outer_iters: self.ensemble.max_outer_iters,
            kmeans_max_iters: self.ensemble.kmeans_max_iters,
            cost: self.ensemble.cost.to_string(),
            restarts: self.restarts,
            baselines: self.baselines.iter().map(|b| baseline_name(*b).to_string()).collect(),
            solver_tol: self.ensemble.solver.tol,
            solver_max_iters: self.ensemble.solver.max_iters,
        }
    }
}
