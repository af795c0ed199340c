//! The outer ensemble loop: relax, round, refine, perturb, grow the pool.

mod adjust;
mod expand;
mod local;

pub use adjust::{adjust_solution, Adjusted};
pub use expand::expand_clusters;
pub use local::{
    iteration_optimization, move_delta, move_threshold, single_move_descent, MOVE_TOL,
};

use std::time::Instant;

use crate::data::{CandidateCluster, CostKind, Dataset, Partition};
use crate::error::{Result, SceError};
use crate::graph::{default_sigma, discriminative_distances, estimate_eta, ClusterGraph};
use crate::initial::{generate_pool, PoolConfig};
use crate::qp::{build_problem, solve_keeping_last, RelaxedSolution, SolverOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    /// Weight of the Laplacian regularizer.
    pub beta: f64,
    /// Multiplier on `k * theta` giving the dispersion bound.
    pub eta_scale: f64,
    /// Length of each expansion chain.
    pub omega: usize,
    pub rel_err_stop: f64,
    pub max_outer_iters: usize,
    pub kmeans_max_iters: usize,
    pub cost: CostKind,
    pub solver: SolverOptions,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            beta: 0.6,
            eta_scale: 1.0,
            omega: 10,
            rel_err_stop: 0.005,
            max_outer_iters: 50,
            kmeans_max_iters: 100,
            cost: CostKind::Squared,
            solver: SolverOptions::default(),
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SceError::InvalidConfig(m.into()));
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad("beta must be a finite nonnegative number");
        }
        if !(self.eta_scale >= 0.0 && self.eta_scale.is_finite()) {
            return bad("eta_scale must be a finite nonnegative number");
        }
        if self.omega == 0 {
            return bad("omega must be at least 1");
        }
        if !(self.rel_err_stop > 0.0 && self.rel_err_stop < 1.0) {
            return bad("rel_err_stop must lie in (0, 1)");
        }
        if self.max_outer_iters == 0 || self.kmeans_max_iters == 0 {
            return bad("iteration limits must be at least 1");
        }
        Ok(())
    }
}

/// One outer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// MSSC of this iteration's refined partition.
    pub mssc: f64,
    /// MSSC of the rounded partition before refinement.
    pub adjusted_mssc: f64,
    pub best_mssc: f64,
    /// Pool size the relaxation was solved over.
    pub q: usize,
    pub objective: f64,
    pub eta_used: f64,
    pub solver_iters: usize,
    pub filter_relaxed: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnsembleTrace {
    pub records: Vec<IterationRecord>,
    pub theta: f64,
    pub eta: f64,
    pub sigma: f64,
    pub initial_q: usize,
    pub converged: bool,
}

/// Largest `dᵀx` reachable with `Σx = k` and `0 ≤ x ≤ 1`.
fn max_dispersion(d: &[f64], k: usize) -> f64 {
    let mut v = d.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.iter().take(k).sum()
}

const MAX_HALVINGS: usize = 60;

/// Solves the relaxation, halving `eta` while it is unattainable and finally
/// dropping it. Returns the solution and the bound actually used.
fn solve_with_halving(
    problem: &mut crate::qp::SceProblem,
    opts: &SolverOptions,
    warm: Option<&[f64]>,
) -> Result<(RelaxedSolution, f64)> {
    let reach = max_dispersion(&problem.d, problem.k);
    let mut halvings = 0;
    while problem.eta > reach && halvings < MAX_HALVINGS {
        problem.eta *= 0.5;
        halvings += 1;
    }
    let mut start = warm.map(<[f64]>::to_vec);
    loop {
        if halvings >= MAX_HALVINGS {
            problem.eta = 0.0;
        }
        let mut last = Vec::new();
        match solve_keeping_last(problem, opts, start.as_deref(), &mut last) {
            Ok(s) => return Ok((s, problem.eta)),
            Err(SceError::EtaInfeasible { .. }) if problem.eta > 0.0 => {
                problem.eta *= 0.5;
                halvings += 1;
                if !last.is_empty() {
                    start = Some(last);
                }
            }
            Err(SceError::MaxItersExceeded { best }) => {
                log::warn!(
                    "relaxation stopped at the iteration limit (kkt {:.3e}); using best iterate",
                    best.kkt_residual
                );
                return Ok((*best, problem.eta));
            }
            Err(e) => return Err(e),
        }
    }
}

/// Runs the full ensemble and returns the best partition seen over all outer
/// iterations together with the per-iteration trace.
pub fn run_sce(
    dataset: &Dataset,
    pool_cfg: &PoolConfig,
    cfg: &EnsembleConfig,
) -> Result<(Partition, EnsembleTrace)> {
    cfg.validate()?;
    let k = pool_cfg.k;
    if k > dataset.n() {
        return Err(SceError::KExceedsN { k, n: dataset.n() });
    }
    let start = Instant::now();
    let (mut pool, initial) = generate_pool(dataset, pool_cfg)?;
    let (theta, eta) = estimate_eta(&initial[0], dataset, k, cfg.eta_scale)?;
    let mut trace = EnsembleTrace {
        theta,
        eta,
        initial_q: pool.q(),
        ..EnsembleTrace::default()
    };
    log::info!("initial pool: q = {}, theta = {theta:.4e}, eta = {eta:.4e}", pool.q());

    let mut best: Option<Partition> = None;
    let mut prev_mssc: Option<f64> = None;
    let mut warm: Option<Vec<f64>> = None;
    for iter in 1..=cfg.max_outer_iters {
        let d = discriminative_distances(&mut pool)?;
        let sigma = default_sigma(&pool)?;
        trace.sigma = sigma;
        let graph = ClusterGraph::heat_kernel(&pool, sigma)?;
        let mut problem = build_problem(&pool, &graph, &d, eta, cfg.beta, k, cfg.cost)?;
        let (solution, eta_used) = solve_with_halving(&mut problem, &cfg.solver, warm.as_deref())?;

        let adjusted = adjust_solution(&solution.x, &pool, &d, eta_used, dataset, k)?;
        let refined = iteration_optimization(dataset, &adjusted.partition, cfg.kmeans_max_iters);
        let mssc = refined.mssc();
        if best.as_ref().is_none_or(|b| mssc < b.mssc()) {
            best = Some(refined.clone());
        }
        let best_mssc = best.as_ref().map_or(mssc, Partition::mssc);

        let q = pool.q();
        for members in expand_clusters(&[&adjusted.partition, &refined], dataset, cfg.omega) {
            pool.add(CandidateCluster::from_sorted(dataset, members)?)?;
        }
        pool.add_partition(dataset, &adjusted.partition)?;
        pool.add_partition(dataset, &refined)?;

        trace.records.push(IterationRecord {
            iter,
            mssc,
            adjusted_mssc: adjusted.partition.mssc(),
            best_mssc,
            q,
            objective: solution.objective,
            eta_used,
            solver_iters: solution.solver_iters,
            filter_relaxed: adjusted.filter_relaxed,
            seconds: start.elapsed().as_secs_f64(),
        });
        log::debug!(
            "iter {iter}: q = {q}, mssc = {mssc:.6e}, best = {best_mssc:.6e}, eta = {eta_used:.3e}, newton = {}",
            solution.solver_iters
        );
        warm = Some(solution.x);

        if let Some(p) = prev_mssc {
            let change = if p > 0.0 { (mssc - p).abs() / p } else { (mssc - p).abs() };
            if change < cfg.rel_err_stop {
                trace.converged = true;
                break;
            }
        }
        prev_mssc = Some(mssc);
    }
    Ok((best.expect("at least one iteration"), trace))
}
