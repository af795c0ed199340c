//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any gating criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sce_core::ensemble::{iteration_optimization, move_delta};
use sce_core::*;

const GAUSS60_SEED: u64 = 0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn gauss60() -> Dataset {
    generate_gaussian_mixture(&MixtureSpec::GAUSS60, GAUSS60_SEED).unwrap().0
}

fn random_dataset(rng: &mut StdRng, n: usize, d: usize, scale: f64) -> Dataset {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(0.0..scale)).collect())
        .collect();
    Dataset::from_rows(&rows).unwrap()
}

/// Labels in `0..k` with every label used.
fn random_labels(rng: &mut StdRng, n: usize, k: usize) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.random_range(0..k) }).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    labels
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn sse(ds: &Dataset, members: &[usize]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let mut m = vec![0.0; ds.d()];
    for &i in members {
        for (a, v) in m.iter_mut().zip(ds.point(i)) {
            *a += v;
        }
    }
    m.iter_mut().for_each(|a| *a /= members.len() as f64);
    members.iter().map(|&i| sq(ds.point(i), &m)).sum()
}

fn mssc_of(ds: &Dataset, labels: &[usize], k: usize) -> f64 {
    (0..k)
        .map(|c| {
            let members: Vec<usize> = (0..ds.n()).filter(|&i| labels[i] == c).collect();
            sse(ds, &members)
        })
        .sum()
}

// 1. Ensemble vs best of 100 k-means restarts.
fn ensemble_dominance() -> Verdict {
    let ds = gauss60();
    let t = Instant::now();
    let mut wins = 0;
    let mut all_within = true;
    let mut parts = Vec::new();
    for k in [10, 20, 30, 40] {
        let (p, _) = run_sce(&ds, &PoolConfig::new(k, 0), &EnsembleConfig::default()).unwrap();
        let km = kmeans_best_of(&ds, k, 100, Seeding::Forgy, 100, 0).unwrap();
        let ratio = p.mssc() / km.partition.mssc();
        all_within &= ratio <= 1.001;
        wins += usize::from(p.mssc() < km.partition.mssc());
        parts.push(format!("k={k} sce/kmeans={ratio:.4}"));
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        all_within && wins >= 3 && secs < 180.0,
        format!("{}; strictly lower {wins}/4; {secs:.1}s", parts.join(", ")),
    )
}

// 2. Convergence over 100 seeded runs at k = 10.
fn convergence() -> Verdict {
    let ds = gauss60();
    let mut converged = 0;
    let mut monotone = true;
    let mut worst = 0;
    for seed in 0..100 {
        let (_, trace) = run_sce(&ds, &PoolConfig::new(10, seed), &EnsembleConfig::default()).unwrap();
        let iters = trace.records.len();
        worst = worst.max(iters);
        converged += usize::from(trace.converged && iters <= 50);
        monotone &= trace.records.windows(2).all(|w| w[1].best_mssc <= w[0].best_mssc);
    }
    verdict(
        converged >= 95 && monotone,
        format!("converged in {converged}/100 runs; longest {worst} iterations; best trace non-increasing: {monotone}"),
    )
}

fn exhaustive_optimum(ds: &Dataset, k: usize) -> f64 {
    fn rec(ds: &Dataset, k: usize, labels: &mut Vec<usize>, used: usize, best: &mut f64) {
        let n = ds.n();
        let i = labels.len();
        if n - i < k - used {
            return;
        }
        if i == n {
            *best = best.min(mssc_of(ds, labels, k));
            return;
        }
        for c in 0..(used + 1).min(k) {
            labels.push(c);
            rec(ds, k, labels, used.max(c + 1), best);
            labels.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(ds, k, &mut Vec::with_capacity(ds.n()), 0, &mut best);
    best
}

// 3. Small instances against exhaustive enumeration.
fn exact_optimum() -> Verdict {
    let mut rng = StdRng::seed_from_u64(3);
    let t = Instant::now();
    let (mut close, mut below) = (0, 0);
    let mut worst: f64 = 0.0;
    for inst in 0..50 {
        let n = rng.random_range(6..=12);
        let k = rng.random_range(2..=3);
        let ds = random_dataset(&mut rng, n, 2, 10.0);
        let opt = exhaustive_optimum(&ds, k);
        let (p, _) = run_sce(&ds, &PoolConfig::new(k, inst), &EnsembleConfig::default()).unwrap();
        let gap = p.mssc() / opt - 1.0;
        worst = worst.max(gap);
        close += usize::from(gap <= 0.05);
        below += usize::from(p.mssc() < opt * (1.0 - 1e-12));
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        close >= 45 && below == 0 && secs < 30.0,
        format!("within 5% in {close}/50; below optimum {below}; worst gap {:.2}%; {secs:.1}s", 100.0 * worst),
    )
}

struct QpInstance {
    problem: SceProblem,
    cost: Vec<f64>,
    lap: Vec<Vec<f64>>,
    cols: Vec<Vec<usize>>,
    d: Vec<f64>,
    n: usize,
}

impl QpInstance {
    fn objective(&self, x: &[f64]) -> f64 {
        let q = x.len();
        let mut v: f64 = self.cost.iter().zip(x).map(|(c, y)| c * y).sum();
        let mut quad = 0.0;
        for i in 0..q {
            for j in 0..q {
                quad += x[i] * self.lap[i][j] * x[j];
            }
        }
        v += self.problem.beta * quad;
        v
    }

    fn feasible(&self, x: &[f64], tol: f64) -> bool {
        let k = self.problem.k as f64;
        if x.iter().any(|&v| v < -tol || v > 1.0 + tol) || (x.iter().sum::<f64>() - k).abs() > tol {
            return false;
        }
        let mut cover = vec![0.0; self.n];
        for (j, col) in self.cols.iter().enumerate() {
            for &p in col {
                cover[p] += x[j];
            }
        }
        cover.iter().all(|&c| c >= 1.0 - tol)
            && self.d.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() >= self.problem.eta - tol
    }
}

fn qp_instance(rng: &mut StdRng) -> QpInstance {
    let n = rng.random_range(4..=9);
    let k = rng.random_range(2..=3.min(n - 1));
    let q_target = rng.random_range(k + 1..=10);
    let ds = random_dataset(rng, n, 2, 1.0);
    let mut pool = CandidatePool::new(&ds);
    pool.add_partition(&ds, &Partition::from_labels(&ds, &random_labels(rng, n, k)).unwrap())
        .unwrap();
    while pool.q() < q_target {
        let size = rng.random_range(1..=n);
        let members: Vec<usize> = (0..size).map(|_| rng.random_range(0..n)).collect();
        pool.add(CandidateCluster::from_members(&ds, &members).unwrap()).unwrap();
    }
    let q = pool.q();
    let d = discriminative_distances(&mut pool).unwrap();
    let sigma = default_sigma(&pool).unwrap();
    let graph = ClusterGraph::heat_kernel(&pool, sigma).unwrap();
    let cols: Vec<Vec<usize>> = pool.clusters().iter().map(|c| c.members().to_vec()).collect();
    let cost: Vec<f64> = cols.iter().map(|m| sse(&ds, m)).collect();
    let centroids: Vec<Vec<f64>> = pool.clusters().iter().map(|c| c.centroid().to_vec()).collect();
    let w = |i: usize, j: usize| (-sq(&centroids[i], &centroids[j]) / sigma).exp();
    let lap: Vec<Vec<f64>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| if i == j { (0..q).filter(|&l| l != i).map(|l| w(i, l)).sum() } else { -w(i, j) })
                .collect()
        })
        .collect();
    let beta = rng.random_range(0.0..1.0);
    let mut inst = QpInstance {
        problem: build_problem(&pool, &graph, &d, 0.0, beta, k, CostKind::Squared).unwrap(),
        cost,
        lap,
        cols,
        d,
        n,
    };
    let best_disc = binary_selections(&inst)
        .map(|x| inst.d.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>())
        .fold(0.0, f64::max);
    let eta = rng.random_range(0.0..1.0) * best_disc;
    inst.problem = build_problem(&pool, &graph, &inst.d, eta, beta, k, CostKind::Squared).unwrap();
    inst
}

/// Every feasible 0/1 vector with exactly k ones.
fn binary_selections(inst: &QpInstance) -> impl Iterator<Item = Vec<f64>> + '_ {
    let q = inst.cost.len();
    (0u32..1 << q)
        .filter(move |m| m.count_ones() as usize == inst.problem.k)
        .map(move |m| (0..q).map(|i| f64::from((m >> i) & 1)).collect::<Vec<f64>>())
        .filter(|x| inst.feasible(x, 0.0))
}

/// Euclidean projection onto `{0 <= x <= 1, Σx = k}` by bisection on the shift.
fn project_capped_simplex(y: &[f64], k: f64) -> Vec<f64> {
    let total = |t: f64| y.iter().map(|v| (v - t).clamp(0.0, 1.0)).sum::<f64>();
    let (mut lo, mut hi) = (
        y.iter().fold(f64::INFINITY, |a, b| a.min(*b)) - 1.0,
        y.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b)),
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) > k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    y.iter().map(|v| (v - t).clamp(0.0, 1.0)).collect()
}

/// Independent estimate of the relaxed optimum: the best point of an
/// exhaustive grid over the feasible region (last coordinate eliminated
/// through `Σx = k`), refined by an augmented-Lagrangian projected-gradient
/// method started from it. Returns the lower of the two feasible values.
fn grid_oracle(inst: &QpInstance) -> Option<f64> {
    let q = inst.cost.len();
    let k = inst.problem.k as f64;
    let free = q - 1;
    let lift = |y: &[f64]| -> Vec<f64> {
        let mut x = y.to_vec();
        x.push(k - y.iter().sum::<f64>());
        x
    };
    let per_dim = ((2e5f64).powf(1.0 / free as f64).floor() as usize).max(3);
    let steps = per_dim - 1;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut idx = vec![0usize; free];
    loop {
        let x = lift(&idx.iter().map(|&i| i as f64 / steps as f64).collect::<Vec<_>>());
        if inst.feasible(&x, 1e-12) {
            let v = inst.objective(&x);
            if best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, x));
            }
        }
        let Some(pos) = idx.iter().position(|&i| i < steps) else { break };
        idx[pos] += 1;
        idx[..pos].iter_mut().for_each(|i| *i = 0);
    }
    let (grid_best, mut x) = best?;

    // Inequalities g(x) = b - Gx <= 0: one per point, then dispersion.
    let mut rows: Vec<Vec<f64>> = (0..inst.n)
        .map(|p| (0..q).map(|j| f64::from(u8::from(inst.cols[j].contains(&p)))).collect())
        .collect();
    rows.push(inst.d.clone());
    let b: Vec<f64> = (0..inst.n).map(|_| 1.0).chain([inst.problem.eta]).collect();
    let beta = inst.problem.beta;
    let lap_norm: f64 = inst.lap.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let g_norm: f64 = rows.iter().flatten().map(|v| v * v).sum::<f64>();
    let mut lambda = vec![0.0; rows.len()];
    let rho = 1e3;
    let step = 1.0 / (2.0 * beta * lap_norm + rho * g_norm + 1e-12);
    for _ in 0..300 {
        let (mut z, mut prev, mut t) = (x.clone(), x.clone(), 1.0f64);
        for _ in 0..3000 {
            let mut grad: Vec<f64> = (0..q)
                .map(|i| inst.cost[i] + 2.0 * beta * (0..q).map(|j| inst.lap[i][j] * z[j]).sum::<f64>())
                .collect();
            for (r, row) in rows.iter().enumerate() {
                let g = b[r] - row.iter().zip(&z).map(|(a, v)| a * v).sum::<f64>();
                let m = (lambda[r] + rho * g).max(0.0);
                for (gi, a) in grad.iter_mut().zip(row) {
                    *gi -= m * a;
                }
            }
            let y: Vec<f64> = z.iter().zip(&grad).map(|(v, g)| v - step * g).collect();
            let next = project_capped_simplex(&y, k);
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let moved = next.iter().zip(&prev).fold(0.0f64, |m, (a, p)| m.max((a - p).abs()));
            z = next.iter().zip(&prev).map(|(a, p)| a + (t - 1.0) / t_next * (a - p)).collect();
            prev = next;
            t = t_next;
            if moved < 1e-13 {
                break;
            }
        }
        x = prev;
        let mut shift = 0.0f64;
        for (r, row) in rows.iter().enumerate() {
            let g = b[r] - row.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>();
            let next = (lambda[r] + rho * g).max(0.0);
            shift = shift.max((next - lambda[r]).abs());
            lambda[r] = next;
        }
        if shift < 1e-10 {
            break;
        }
    }
    let refined = inst.feasible(&x, 1e-7).then(|| inst.objective(&x));
    Some(refined.map_or(grid_best, |v| v.min(grid_best)))
}

// 4. Relaxation against a grid oracle and against every binary selection.
fn qp_correctness() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    let (mut grid_ok, mut bound_ok, mut worst_grid) = (0, 0, 0.0f64);
    let mut failures = Vec::new();
    for i in 0..100 {
        let inst = qp_instance(&mut rng);
        let sol = match solve_relaxed(&inst.problem, 1e-9, 200) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("#{i}: {e}"));
                continue;
            }
        };
        let oracle = grid_oracle(&inst).expect("a binary selection is feasible");
        let diff = (sol.objective - oracle).abs();
        worst_grid = worst_grid.max(diff);
        if diff <= 1e-3 {
            grid_ok += 1;
        } else {
            failures.push(format!("#{i}: relaxed {} vs grid {oracle}", sol.objective));
        }
        if binary_selections(&inst).all(|x| sol.objective <= inst.objective(&x) + 1e-8) {
            bound_ok += 1;
        } else {
            failures.push(format!("#{i}: exceeds a binary selection"));
        }
    }
    let mut detail = format!(
        "grid within 1e-3 on {grid_ok}/100 (worst {worst_grid:.2e}); lower bound on {bound_ok}/100"
    );
    if !failures.is_empty() {
        detail += &format!("; {}", failures.join("; "));
    }
    verdict(grid_ok == 100 && bound_ok == 100, detail)
}

// 5. Incremental move deltas and single-move optimality of local search.
fn local_search() -> Verdict {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut moves = 0;
    while moves < 1000 {
        let n = rng.random_range(5..=60);
        let k = rng.random_range(2..=6.min(n));
        let ds = random_dataset(&mut rng, n, 3, 100.0);
        let labels = random_labels(&mut rng, n, k);
        let p = Partition::from_labels(&ds, &labels).unwrap();
        let i = rng.random_range(0..n);
        let (from, to) = (labels[i], rng.random_range(0..k));
        let sizes = p.sizes();
        if to == from || sizes[from] < 2 {
            continue;
        }
        let cs = p.centroids(&ds);
        let delta = move_delta(ds.point(i), &cs[from], sizes[from], &cs[to], sizes[to]);
        let mut moved = labels.clone();
        moved[i] = to;
        let before = mssc_of(&ds, &labels, k);
        let exact = mssc_of(&ds, &moved, k) - before;
        worst = worst.max((delta - exact).abs() / before.max(f64::MIN_POSITIVE));
        moves += 1;
    }
    let mut improving = 0;
    for _ in 0..100 {
        let n = rng.random_range(10..=100);
        let k = rng.random_range(2..=8);
        let ds = random_dataset(&mut rng, n, 2, 100.0);
        let p = Partition::from_labels(&ds, &random_labels(&mut rng, n, k)).unwrap();
        let out = iteration_optimization(&ds, &p, 100);
        let labels = out.labels();
        let base = mssc_of(&ds, labels, out.k());
        let sizes = out.sizes();
        for i in 0..n {
            if sizes[labels[i]] < 2 {
                continue;
            }
            for c in (0..out.k()).filter(|&c| c != labels[i]) {
                let mut moved = labels.to_vec();
                moved[i] = c;
                if mssc_of(&ds, &moved, out.k()) < base * (1.0 - 1e-9) {
                    improving += 1;
                }
            }
        }
    }
    verdict(
        worst <= 1e-9 && improving == 0,
        format!("worst relative delta error {worst:.1e} over 1000 moves; improving moves after local search {improving} on 100 instances"),
    )
}

// 6. Laplacian identities on random pools.
fn laplacian_identities() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let (mut worst_form, mut worst_ones, mut min_quad) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut pools = 0;
    while pools < 100 {
        let n = rng.random_range(10..=60);
        let ds = random_dataset(&mut rng, n, 2, 50.0);
        let mut pool = CandidatePool::new(&ds);
        for _ in 0..rng.random_range(1..=8) {
            let k = rng.random_range(2..=8.min(n));
            pool.add_partition(&ds, &Partition::from_labels(&ds, &random_labels(&mut rng, n, k)).unwrap())
                .unwrap();
            if pool.q() >= 50 {
                break;
            }
        }
        if pool.q() > 50 || pool.q() < 2 {
            continue;
        }
        pools += 1;
        let q = pool.q();
        let g = ClusterGraph::heat_kernel(&pool, default_sigma(&pool).unwrap()).unwrap();
        let ones = g.laplacian_times(&vec![1.0; q]).unwrap();
        let scale = g.degree().iter().fold(1.0f64, |a, b| a.max(*b));
        worst_ones = worst_ones.max(ones.iter().fold(0.0f64, |a, b| a.max(b.abs())) / scale);
        for _ in 0..100 {
            let x: Vec<f64> = (0..q).map(|_| rng.random_range(-1.0..1.0)).collect();
            let quad = laplacian_quadratic(&g, &x).unwrap();
            let mut pairwise = 0.0;
            for i in 0..q {
                for j in 0..q {
                    pairwise += (x[i] - x[j]).powi(2) * g.weight(i, j);
                }
            }
            pairwise *= 0.5;
            worst_form = worst_form.max((quad - pairwise).abs() / pairwise.abs().max(1e-300));
            min_quad = min_quad.min(quad);
        }
    }
    verdict(
        worst_form <= 1e-9 && worst_ones <= 1e-9 && min_quad >= -1e-8,
        format!("worst relative form error {worst_form:.1e}; max |L1| {worst_ones:.1e}; min xᵀLx {min_quad:.3e}"),
    )
}

fn brute_force_accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    let r = pred.iter().chain(truth).max().unwrap() + 1;
    let mut perm: Vec<usize> = (0..r).collect();
    let mut best = 0;
    loop {
        let hits = pred.iter().zip(truth).filter(|(p, t)| perm[**p] == **t).count();
        best = best.max(hits);
        // next lexicographic permutation
        let Some(i) = (0..r.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..r).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best as f64 / pred.len() as f64
}

// 7. Accuracy against brute-force matching, and the relative-error arithmetic.
fn metrics() -> Verdict {
    let mut rng = StdRng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.random_range(6..=40);
        let kp = rng.random_range(1..=6);
        let kt = rng.random_range(1..=6);
        let ds = random_dataset(&mut rng, n, 1, 1.0);
        let pred = random_labels(&mut rng, n, kp);
        let truth: Vec<usize> = (0..n).map(|_| rng.random_range(0..kt)).collect();
        let p = Partition::from_labels(&ds, &pred).unwrap();
        let ac = clustering_accuracy(&p, &truth).unwrap();
        if (ac - brute_force_accuracy(p.labels(), &truth)).abs() > 1e-12 {
            mismatches += 1;
        }
    }
    let re = relative_error(4.5581e3, 5.4918e3).unwrap();
    verdict(
        mismatches == 0 && (re - 17.00).abs() <= 0.05,
        format!("AC mismatches {mismatches}/200; RE(4.5581e3 vs 5.4918e3) = {re:.3}%"),
    )
}

// 8. Sensitivity to beta; reported, not gating.
fn beta_sensitivity() -> Verdict {
    let spec = MixtureSpec {
        clusters: 8,
        points_per_cluster: 25,
        dim: 2,
        center_box: 20.0,
        stddev: 1.5,
    };
    let ds = generate_gaussian_mixture(&spec, 8).unwrap().0;
    let at = |beta: f64| {
        let cfg = EnsembleConfig {
            beta,
            ..EnsembleConfig::default()
        };
        run_sce(&ds, &PoolConfig::new(5, 0), &cfg).unwrap().0.mssc()
    };
    let base = at(0.0);
    let vals: Vec<f64> = [0.5, 0.6, 0.7].into_iter().map(at).collect();
    let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    let spread = hi / lo - 1.0;
    verdict(
        spread < 0.02 && hi <= 1.05 * base,
        format!(
            "beta=0: {base:.4e}; beta 0.5/0.6/0.7: {:.4e}/{:.4e}/{:.4e}; spread {:.2}%",
            vals[0],
            vals[1],
            vals[2],
            100.0 * spread
        ),
    )
}

// 9. Two identical CLI invocations write identical records.
fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_sce"))
            .args(["run", "--gen", "gauss60", "--k", "10", "--restarts", "20", "--no-timings", "--out"])
            .arg(out)
            .env_clear()
            .status()
            .unwrap();
        assert!(status.success());
        ["result.json-lines", "trace.csv"].map(|f| std::fs::read(out.join(f)).unwrap())
    };
    let a = run(&dir.path().join("a"));
    let b = run(&dir.path().join("b"));
    verdict(a == b, format!("{} record bytes; identical: {}", a[0].len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, bool); 9] = [
        ("1 ensemble dominance", ensemble_dominance, true),
        ("2 convergence", convergence, true),
        ("3 exact optimum", exact_optimum, true),
        ("4 relaxation correctness", qp_correctness, true),
        ("5 local search", local_search, true),
        ("6 laplacian identities", laplacian_identities, true),
        ("7 metrics", metrics, true),
        ("8 beta sensitivity", beta_sensitivity, false),
        ("9 determinism", determinism, true),
    ];
    let only: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, check, gating) in criteria {
        if only.as_deref().is_some_and(|o| !name.contains(o)) {
            continue;
        }
        let t = Instant::now();
        let v = check();
        let tag = match (v.pass, gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        println!("{tag} criterion {name}: {} [{:.1}s]", v.detail, t.elapsed().as_secs_f64());
        failed += usize::from(!v.pass && gating);
    }
    if failed > 0 {
        println!("{failed} gating criteria failed");
        std::process::exit(1);
    }
}
