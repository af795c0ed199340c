//! The relaxed set-covering program
//!
//! ```text
//! min  cᵀx + β xᵀLx
//! s.t. A x ≥ e,  Σ x_i = k,  dᵀx ≥ η,  0 ≤ x ≤ 1
//! ```
//!
//! solved by an interior-point method over a working set of candidates. After
//! each restricted solve, the reduced cost of every candidate outside the set is
//! priced with the restricted duals; violators join the set and the loop stops
//! once none remain, at which point the restricted optimum satisfies the KKT
//! conditions of the full program.

mod instance;
mod ipm;

pub use instance::{read_instance, write_instance};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::data::{CandidatePool, CostKind};
use crate::error::{Result, SceError};
use crate::graph::ClusterGraph;
use ipm::QpData;

/// The Laplacian of the regularizer, either as an implicit heat-kernel graph or
/// an explicit symmetric matrix.
#[derive(Debug, Clone)]
pub enum Laplacian {
    Kernel(ClusterGraph),
    Dense(DMatrix<f64>),
}

impl Laplacian {
    /// Symmetrizes `m` and clips roundoff-negative eigenvalues to zero.
    pub fn dense(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(SceError::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        if eig.eigenvalues.min() >= 0.0 {
            return Ok(Self::Dense(sym));
        }
        let clipped = eig.eigenvalues.map(|v| v.max(0.0));
        let rebuilt = &eig.eigenvectors
            * DMatrix::from_diagonal(&clipped)
            * eig.eigenvectors.transpose();
        Ok(Self::Dense((&rebuilt + rebuilt.transpose()) * 0.5))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Kernel(g) => g.q(),
            Self::Dense(m) => m.nrows(),
        }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match self {
            Self::Kernel(g) => g.laplacian_entry(i, j),
            Self::Dense(m) => m[(i, j)],
        }
    }

    /// `xᵀLx` summed over the nonzero entries of `x`.
    pub fn quadratic_sparse(&self, x: &[f64]) -> f64 {
        let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
        let mut acc = 0.0;
        for (a, &i) in support.iter().enumerate() {
            acc += x[i] * x[i] * self.entry(i, i);
            for &j in &support[a + 1..] {
                acc += 2.0 * x[i] * x[j] * self.entry(i, j);
            }
        }
        acc
    }
}

/// A fully specified relaxed SCE instance.
#[derive(Debug, Clone)]
pub struct SceProblem {
    pub cost: Vec<f64>,
    pub laplacian: Laplacian,
    pub beta: f64,
    /// Member points of each candidate.
    pub columns: Vec<Vec<usize>>,
    /// Candidates covering each point.
    pub rows: Vec<Vec<usize>>,
    pub k: usize,
    pub d: Vec<f64>,
    pub eta: f64,
}

impl SceProblem {
    pub fn q(&self) -> usize {
        self.cost.len()
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Assembles an instance from raw parts, checking shapes and feasibility witnesses.
    pub fn new(
        cost: Vec<f64>,
        laplacian: Laplacian,
        beta: f64,
        columns: Vec<Vec<usize>>,
        n: usize,
        k: usize,
        d: Vec<f64>,
        eta: f64,
    ) -> Result<Self> {
        let q = cost.len();
        for len in [laplacian.dim(), columns.len(), d.len()] {
            if len != q {
                return Err(SceError::DimensionMismatch {
                    expected: q,
                    got: len,
                });
            }
        }
        if !(beta >= 0.0) || !(eta >= 0.0) || cost.iter().any(|c| !(*c >= 0.0)) {
            return Err(SceError::InvalidConfig(
                "beta, eta and costs must be nonnegative".into(),
            ));
        }
        if k == 0 {
            return Err(SceError::InvalidConfig("k must be at least 1".into()));
        }
        if q < k {
            return Err(SceError::TooFewCandidates { q, k });
        }
        let mut rows = vec![Vec::new(); n];
        for (j, col) in columns.iter().enumerate() {
            for &p in col {
                if p >= n {
                    return Err(SceError::IndexOutOfRange { index: p, n });
                }
                rows[p].push(j);
            }
        }
        if let Some(point) = rows.iter().position(Vec::is_empty) {
            return Err(SceError::InfeasibleCoverage { point });
        }
        Ok(Self {
            cost,
            laplacian,
            beta,
            columns,
            rows,
            k,
            d,
            eta,
        })
    }

    /// `cᵀx + β xᵀLx`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let lin: f64 = self.cost.iter().zip(x).map(|(c, v)| c * v).sum();
        if self.beta == 0.0 {
            lin
        } else {
            lin + self.beta * self.laplacian.quadratic_sparse(x)
        }
    }

    /// Largest violation of the relaxed constraints at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut v: f64 = (x.iter().sum::<f64>() - self.k as f64).abs();
        for xi in x {
            v = v.max(-xi).max(xi - 1.0);
        }
        for row in &self.rows {
            v = v.max(1.0 - row.iter().map(|&j| x[j]).sum::<f64>());
        }
        let dx: f64 = self.d.iter().zip(x).map(|(a, b)| a * b).sum();
        v.max(self.eta - dx)
    }
}

/// Builds the relaxed program from the pool, its graph and dispersion data.
pub fn build_problem(
    pool: &CandidatePool,
    graph: &ClusterGraph,
    d: &[f64],
    eta: f64,
    beta: f64,
    k: usize,
    cost_kind: CostKind,
) -> Result<SceProblem> {
    if let Some(point) = pool.first_uncovered() {
        return Err(SceError::InfeasibleCoverage { point });
    }
    if pool.q() < k {
        return Err(SceError::TooFewCandidates { q: pool.q(), k });
    }
    SceProblem::new(
        pool.clusters().iter().map(|c| c.cost_of(cost_kind)).collect(),
        Laplacian::Kernel(graph.clone()),
        beta,
        pool.clusters().iter().map(|c| c.members().to_vec()).collect(),
        pool.n(),
        k,
        d.to_vec(),
        eta,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Newton steps summed over all restricted solves.
    pub solver_iters: usize,
    pub kkt_residual: f64,
    /// Optimal objective of each restricted problem, one entry per pricing round.
    /// Non-increasing, since each round only enlarges the candidate set.
    pub objective_trace: Vec<f64>,
    pub pricing_rounds: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Problems with at most this many candidates are solved without pricing.
    pub full_limit: usize,
    pub max_rounds: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: 200,
            full_limit: 250,
            max_rounds: 200,
        }
    }
}

const COVER_PENALTY: f64 = 1e6;
const DISC_PENALTY: f64 = 1e4;

pub fn solve_relaxed(problem: &SceProblem, tol: f64, max_iters: usize) -> Result<RelaxedSolution> {
    let opts = SolverOptions {
        tol,
        max_iters,
        ..SolverOptions::default()
    };
    solve_relaxed_with(problem, &opts, None)
}

/// Solves the relaxation. `warm` holds the previous solution over a prefix of
/// the candidates (the pool only grows); its support seeds the working set and
/// its values, clipped into the interior, seed the starting point.
pub fn solve_relaxed_with(
    problem: &SceProblem,
    opts: &SolverOptions,
    warm: Option<&[f64]>,
) -> Result<RelaxedSolution> {
    solve_keeping_last(problem, opts, warm, &mut Vec::new())
}

/// As [`solve_relaxed_with`]; when the dispersion bound proves unattainable the
/// final iterate is left in `last` so a retry can start from its support.
pub(crate) fn solve_keeping_last(
    problem: &SceProblem,
    opts: &SolverOptions,
    warm: Option<&[f64]>,
    last: &mut Vec<f64>,
) -> Result<RelaxedSolution> {
    let q = problem.q();
    let k = problem.k;
    if q == k {
        // The box and Σx = q leave the all-ones vector as the only feasible point.
        let x = vec![1.0; q];
        let dx: f64 = problem.d.iter().sum();
        if dx < problem.eta * (1.0 - 1e-12) {
            return Err(SceError::EtaInfeasible { eta: problem.eta });
        }
        let objective = problem.objective(&x);
        return Ok(RelaxedSolution {
            x,
            objective,
            solver_iters: 0,
            kkt_residual: 0.0,
            objective_trace: vec![objective],
            pricing_rounds: 0,
        });
    }

    let scale = {
        let cmax = problem.cost.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lmax = (0..q)
            .map(|i| problem.laplacian.entry(i, i).abs())
            .fold(0.0f64, f64::max);
        let s = cmax.max(2.0 * problem.beta * lmax);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    };
    let dscale = problem.d.iter().fold(0.0f64, |m, v| m.max(*v));
    let use_disc = problem.eta > 0.0;
    if use_disc && dscale <= 0.0 {
        return Err(SceError::EtaInfeasible { eta: problem.eta });
    }
    let hess_factor = 2.0 * problem.beta / scale;

    let mut in_set = vec![false; q];
    let mut set: Vec<usize> = Vec::new();
    let push = |j: usize, set: &mut Vec<usize>, in_set: &mut Vec<bool>| {
        if !in_set[j] {
            in_set[j] = true;
            set.push(j);
        }
    };
    if q <= opts.full_limit {
        (0..q).for_each(|j| push(j, &mut set, &mut in_set));
    } else {
        if let Some(w) = warm {
            for (j, &v) in w.iter().enumerate().take(q) {
                if v > 1e-6 {
                    push(j, &mut set, &mut in_set);
                }
            }
        }
        // cheapest candidates per covered point
        let mut order: Vec<usize> = (0..q).collect();
        order.sort_by(|&a, &b| {
            let ra = problem.cost[a] / problem.columns[a].len() as f64;
            let rb = problem.cost[b] / problem.columns[b].len() as f64;
            ra.total_cmp(&rb).then(a.cmp(&b))
        });
        let target = (3 * k).max(64).min(q);
        for &j in &order {
            if set.len() >= target {
                break;
            }
            push(j, &mut set, &mut in_set);
        }
        // keep at least one covering column per point
        for row in &problem.rows {
            if !row.iter().any(|&j| in_set[j]) {
                let best = *row
                    .iter()
                    .min_by(|&&a, &&b| problem.cost[a].total_cmp(&problem.cost[b]).then(a.cmp(&b)))
                    .expect("covered");
                push(best, &mut set, &mut in_set);
            }
        }
    }

    let mut x_full = vec![0.0; q];
    if let Some(w) = warm {
        for (j, &v) in w.iter().enumerate().take(q) {
            x_full[j] = v;
        }
    }
    let ipm_tol = opts.tol * 0.1;
    let price_tol = opts.tol;
    let mut total_iters = 0;
    let mut trace = Vec::new();
    let mut rounds = 0;
    let mut warm_local: Option<Vec<f64>> = warm.map(|_| set.iter().map(|&j| x_full[j]).collect());

    loop {
        rounds += 1;
        let w = set.len();
        let mut local = vec![usize::MAX; q];
        for (a, &j) in set.iter().enumerate() {
            local[j] = a;
        }
        let mut hess = DMatrix::zeros(w, w);
        if hess_factor != 0.0 {
            for b in 0..w {
                for a in b..w {
                    let v = hess_factor * problem.laplacian.entry(set[a], set[b]);
                    hess[(a, b)] = v;
                    hess[(b, a)] = v;
                }
            }
        }
        let data = QpData {
            hess,
            c: set.iter().map(|&j| problem.cost[j] / scale).collect(),
            rows: problem
                .rows
                .iter()
                .map(|r| r.iter().filter_map(|&j| in_set[j].then(|| local[j])).collect())
                .collect(),
            k: k as f64,
            disc: use_disc.then(|| {
                (
                    set.iter().map(|&j| problem.d[j] / dscale).collect(),
                    problem.eta / dscale,
                )
            }),
            cover_penalty: COVER_PENALTY,
            disc_penalty: DISC_PENALTY,
        };
        let sol = data.solve(warm_local.as_deref(), ipm_tol, opts.max_iters);
        total_iters += sol.iters;
        trace.push(
            scale
                * (sol.objective
                    + DISC_PENALTY * sol.t
                    + COVER_PENALTY * sol.u.iter().sum::<f64>()),
        );
        x_full.iter_mut().for_each(|v| *v = 0.0);
        for (a, &j) in set.iter().enumerate() {
            x_full[j] = sol.x[a].clamp(0.0, 1.0);
        }

        if !sol.converged {
            let best = RelaxedSolution {
                objective: problem.objective(&x_full),
                x: x_full,
                solver_iters: total_iters,
                kkt_residual: sol.kkt,
                objective_trace: trace,
                pricing_rounds: rounds,
            };
            return Err(SceError::MaxItersExceeded {
                best: Box::new(best),
            });
        }

        // Reduced costs of the candidates outside the working set.
        let mut violators: Vec<(f64, usize)> = Vec::new();
        if set.len() < q && rounds < opts.max_rounds {
            let support: Vec<(usize, f64)> = set
                .iter()
                .zip(&sol.x)
                .filter(|(_, &v)| v > 1e-12)
                .map(|(&j, &v)| (j, v))
                .collect();
            for j in 0..q {
                if in_set[j] {
                    continue;
                }
                let mut lx = 0.0;
                if hess_factor != 0.0 {
                    for &(i, v) in &support {
                        lx += problem.laplacian.entry(j, i) * v;
                    }
                }
                let mut r = problem.cost[j] / scale + hess_factor * lx - sol.y;
                for &p in &problem.columns[j] {
                    r -= sol.z_cover[p];
                }
                if use_disc {
                    r -= sol.z_disc * problem.d[j] / dscale;
                }
                if r < -price_tol {
                    violators.push((r, j));
                }
            }
        }
        if violators.is_empty() {
            let uncovered = sol.u.iter().fold(0.0f64, |m, v| m.max(*v));
            if uncovered > 1e-6 {
                return Err(SceError::Infeasible);
            }
            if use_disc && sol.t > 1e-6 * (1.0 + problem.eta / dscale) {
                *last = x_full;
                return Err(SceError::EtaInfeasible { eta: problem.eta });
            }
            let x_full = snap_to_bounds(problem, x_full);
            let objective = problem.objective(&x_full);
            return Ok(RelaxedSolution {
                x: x_full,
                objective,
                solver_iters: total_iters,
                kkt_residual: sol.kkt,
                objective_trace: trace,
                pricing_rounds: rounds,
            });
        }
        violators.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let batch = (2 * k).max(64);
        let prev: Vec<f64> = sol.x.clone();
        for &(_, j) in violators.iter().take(batch) {
            push(j, &mut set, &mut in_set);
        }
        let mut next = prev;
        next.resize(set.len(), 0.0);
        warm_local = Some(next);
    }
}

const SNAP_LEVELS: [f64; 4] = [1e-4, 1e-5, 1e-6, 1e-7];

/// Moves entries near a bound onto it, spreading the change in `Σx` over the
/// remaining entries. The widest threshold that neither raises the objective nor
/// loosens feasibility wins; this strips interior-point residue from vertices.
fn snap_to_bounds(problem: &SceProblem, x: Vec<f64>) -> Vec<f64> {
    let tol = problem.max_violation(&x).max(1e-9);
    let base = problem.objective(&x);
    for eps in SNAP_LEVELS {
        let mut y = x.clone();
        let mut free = Vec::new();
        for (i, v) in y.iter_mut().enumerate() {
            if *v < eps {
                *v = 0.0;
            } else if *v > 1.0 - eps {
                *v = 1.0;
            } else {
                free.push(i);
            }
        }
        let gap = problem.k as f64 - y.iter().sum::<f64>();
        if gap != 0.0 {
            if free.is_empty() {
                continue;
            }
            let share = gap / free.len() as f64;
            for &i in &free {
                y[i] = (y[i] + share).clamp(0.0, 1.0);
            }
        }
        if y != x && problem.max_violation(&y) <= tol && problem.objective(&y) <= base {
            return y;
        }
    }
    x
}
