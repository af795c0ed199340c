//! Command-line surface. Every flag can also be set through an `SCE_` variable.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sce_core::{CostKind, MixtureSpec};

#[derive(Debug, Parser)]
#[command(name = "sce", version, about = "Structural cluster ensemble for minimum sum-of-squares clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the ensemble and the baselines for one k.
    Run(RunArgs),
    /// Run once per k and tabulate the results.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, env = "SCE_K")]
    pub k: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated cluster counts, e.g. `10,20,30`.
    #[arg(long, env = "SCE_K_LIST", value_delimiter = ',', required = true, num_args = 1..)]
    pub k_list: Vec<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// CSV dataset; a trailing `label` column is read as ground truth.
    #[arg(long, env = "SCE_DATA", conflicts_with = "gen", required_unless_present = "gen")]
    pub data: Option<PathBuf>,
    /// Gaussian mixture `g:<clusters>,<per>,<d>,<box>,<std>` or `gauss60`.
    #[arg(long, env = "SCE_GEN")]
    pub gen: Option<GenSpec>,
    /// Seed of the mixture generator.
    #[arg(long, env = "SCE_GEN_SEED", default_value_t = 0)]
    pub gen_seed: u64,
    #[arg(long, env = "SCE_BETA", default_value_t = 0.6)]
    pub beta: f64,
    #[arg(long, env = "SCE_ETA_SCALE", default_value_t = 1.0)]
    pub eta_scale: f64,
    #[arg(long, env = "SCE_OMEGA", default_value_t = 10)]
    pub omega: usize,
    /// Number of base partitions.
    #[arg(long, env = "SCE_M", default_value_t = 30)]
    pub m: usize,
    /// Half-width of the cluster-count range; defaults to floor(k / 10).
    #[arg(long, env = "SCE_TAU")]
    pub tau: Option<usize>,
    #[arg(long, env = "SCE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "SCE_BASELINES", value_delimiter = ',', default_value = "kmeans,kmeans_pp,eac")]
    pub baselines: Vec<Baseline>,
    /// Restarts per k-means baseline.
    #[arg(long, env = "SCE_RESTARTS", default_value_t = 100)]
    pub restarts: usize,
    #[arg(long, env = "SCE_REL_ERR_STOP", default_value_t = 0.005)]
    pub rel_err_stop: f64,
    #[arg(long, env = "SCE_MAX_ITERS", default_value_t = 50)]
    pub max_iters: usize,
    #[arg(long, env = "SCE_KMEANS_MAX_ITERS", default_value_t = 100)]
    pub kmeans_max_iters: usize,
    #[arg(long, env = "SCE_COST", default_value = "squared")]
    pub cost: CostKind,
    #[arg(long, env = "SCE_OUT", default_value = "sce-out")]
    pub out: PathBuf,
    /// Also write SVG plots.
    #[arg(long, env = "SCE_PLOTS")]
    pub plots: bool,
    /// Leave wall-clock fields empty so repeated runs produce identical files.
    #[arg(long, env = "SCE_NO_TIMINGS")]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Baseline {
    #[value(name = "kmeans")]
    KMeans,
    #[value(name = "kmeans_pp")]
    KMeansPp,
    #[value(name = "eac")]
    Eac,
}

/// Parameters of a generated Gaussian mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec(pub MixtureSpec);

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("gauss60") {
            return Ok(Self(MixtureSpec::GAUSS60));
        }
        let body = s.strip_prefix("g:").unwrap_or(s);
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        let [c, per, d, bx, sd] = parts[..] else {
            return Err(format!("expected g:<clusters>,<per>,<d>,<box>,<std>, got `{s}`"));
        };
        let count = |v: &str, what: &str| -> Result<usize, String> {
            match v.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(format!("{what} must be a positive integer, got `{v}`")),
            }
        };
        let real = |v: &str, what: &str| -> Result<f64, String> {
            match v.parse::<f64>() {
                Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
                _ => Err(format!("{what} must be a finite nonnegative number, got `{v}`")),
            }
        };
        let stddev = real(sd, "std")?;
        if stddev <= 0.0 {
            return Err("std must be positive".into());
        }
        Ok(Self(MixtureSpec {
            clusters: count(c, "clusters")?,
            points_per_cluster: count(per, "per")?,
            dim: count(d, "d")?,
            center_box: real(bx, "box")?,
            stddev,
        }))
    }
}

impl std::fmt::Display for GenSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m = &self.0;
        write!(
            f,
            "g:{},{},{},{},{}",
            m.clusters, m.points_per_cluster, m.dim, m.center_box, m.stddev
        )
    }
}
