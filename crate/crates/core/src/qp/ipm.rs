//! Mehrotra predictor-corrector interior-point method for the dense restricted
//! problem
//!
//! ```text
//! min  ½ xᵀQx + cᵀx + M_t·t + M_u·Σ u_p
//! s.t. Σ_{i ∈ row p} x_i + u_p ≥ 1        (coverage, one row per point)
//!      dᵀx + t ≥ η                        (dispersion, optional)
//!      Σ x_i = k,  0 ≤ x ≤ 1,  u ≥ 0,  t ≥ 0
//! ```
//!
//! The elastic variables `u` and `t` make every instance feasible and vanish
//! once the penalties exceed the optimal multipliers. Their blocks are diagonal
//! and are eliminated before the Cholesky factorization, so the linear algebra
//! stays `w × w` however many points there are.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

const START_MU: f64 = 10.0;
const U_OFFSET: f64 = 1e-6;
/// Iterations without a new best residual before giving up.
const STALL_ITERS: usize = 15;
/// A stalled run whose best residual is within this factor of the target is accepted.
const NEAR_FACTOR: f64 = 100.0;
/// Relative residual a stalled run may always settle for; below it, progress is
/// limited by roundoff against the elastic penalties.
const ROUNDOFF_FLOOR: f64 = 1e-7;

pub(crate) struct QpData {
    /// Hessian of the quadratic term; the objective uses `½ xᵀQx`.
    pub hess: DMatrix<f64>,
    pub c: Vec<f64>,
    /// Local column indices covering each point.
    pub rows: Vec<Vec<usize>>,
    pub k: f64,
    pub disc: Option<(Vec<f64>, f64)>,
    /// Price of the coverage slacks `u`.
    pub cover_penalty: f64,
    /// Price of the dispersion slack `t`; kept well below `cover_penalty` so an
    /// unattainable bound shows up in `t` rather than in lost coverage.
    pub disc_penalty: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct IpmSolution {
    pub x: Vec<f64>,
    pub t: f64,
    pub u: Vec<f64>,
    pub y: f64,
    pub z_cover: Vec<f64>,
    pub z_disc: f64,
    pub iters: usize,
    pub kkt: f64,
    /// `½ xᵀQx + cᵀx`, penalty excluded.
    pub objective: f64,
    pub converged: bool,
}

/// Primal, slack and dual variables for every constraint block.
#[derive(Clone)]
struct Iterate {
    x: Vec<f64>,
    t: f64,
    u: Vec<f64>,
    y: f64,
    // coverage rows
    sc: Vec<f64>,
    zc: Vec<f64>,
    // dispersion row
    sd: f64,
    zd: f64,
    // x >= 0, 1 - x >= 0
    sl: Vec<f64>,
    zl: Vec<f64>,
    sh: Vec<f64>,
    zh: Vec<f64>,
    // u >= 0, t >= 0
    su: Vec<f64>,
    zu: Vec<f64>,
    st: f64,
    zt: f64,
}

struct Residuals {
    rdx: Vec<f64>,
    rdt: f64,
    rdu: Vec<f64>,
    rp: f64,
    rgc: Vec<f64>,
    rgd: f64,
    rgl: Vec<f64>,
    rgh: Vec<f64>,
    rgu: Vec<f64>,
    rgt: f64,
}

/// Complementarity right-hand sides, one per inequality.
struct Comp {
    c: Vec<f64>,
    d: f64,
    l: Vec<f64>,
    h: Vec<f64>,
    u: Vec<f64>,
    t: f64,
}

struct Step {
    x: Vec<f64>,
    t: f64,
    u: Vec<f64>,
    y: f64,
    sc: Vec<f64>,
    zc: Vec<f64>,
    sd: f64,
    zd: f64,
    sl: Vec<f64>,
    zl: Vec<f64>,
    sh: Vec<f64>,
    zh: Vec<f64>,
    su: Vec<f64>,
    zu: Vec<f64>,
    st: f64,
    zt: f64,
}

impl QpData {
    fn w(&self) -> usize {
        self.c.len()
    }

    fn n_ineq(&self) -> usize {
        2 * self.rows.len() + 2 * self.w() + if self.disc.is_some() { 2 } else { 0 }
    }

    fn cover_sum(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&i| x[i]).sum())
            .collect()
    }

    fn scatter_rows(&self, vals: &[f64], out: &mut [f64]) {
        for (r, &v) in self.rows.iter().zip(vals) {
            for &i in r {
                out[i] += v;
            }
        }
    }

    /// Points grouped by identical covering pattern; each group contributes
    /// one outer product to the Newton matrix.
    fn row_groups(&self) -> Vec<(&[usize], Vec<usize>)> {
        let mut index: HashMap<&[usize], usize> = HashMap::new();
        let mut groups: Vec<(&[usize], Vec<usize>)> = Vec::new();
        for (p, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let g = *index.entry(row.as_slice()).or_insert_with(|| {
                groups.push((row.as_slice(), Vec::new()));
                groups.len() - 1
            });
            groups[g].1.push(p);
        }
        groups
    }

    fn dot_d(&self, x: &[f64]) -> f64 {
        self.disc
            .as_ref()
            .map_or(0.0, |(d, _)| d.iter().zip(x).map(|(a, b)| a * b).sum())
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let xv = DVector::from_column_slice(x);
        let qx = &self.hess * &xv;
        0.5 * xv.dot(&qx) + self.c.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }

    fn start(&self, warm: Option<&[f64]>) -> Iterate {
        let w = self.w();
        let mu0 = START_MU;
        let x: Vec<f64> = match warm {
            Some(xw) => xw.iter().map(|v| v.clamp(1e-3, 1.0 - 1e-3)).collect(),
            None => vec![(self.k / w as f64).clamp(1e-2, 1.0 - 1e-2); w],
        };
        let cover = self.cover_sum(&x);
        let u: Vec<f64> = cover.iter().map(|a| (1.0 - a).max(0.0) + U_OFFSET).collect();
        let pos = |v: f64| v.max(1e-2);
        let sc: Vec<f64> = cover.iter().zip(&u).map(|(a, b)| pos(a + b - 1.0)).collect();
        let (t, sd) = match &self.disc {
            Some((_, eta)) => {
                let dx = self.dot_d(&x);
                let t = (eta - dx).max(0.0) + U_OFFSET;
                (t, pos(dx + t - eta))
            }
            None => (0.0, 1.0),
        };
        let sh: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
        // centred duals; the elastic ones take up the rest of their penalty
        let zc: Vec<f64> = sc.iter().map(|s| mu0 / s).collect();
        let zd = mu0 / sd;
        Iterate {
            zl: x.iter().map(|s| mu0 / s).collect(),
            zh: sh.iter().map(|s| mu0 / s).collect(),
            sl: x.clone(),
            sh,
            su: u.clone(),
            zu: zc.iter().map(|z| self.cover_penalty - z).collect(),
            st: t,
            zt: self.disc_penalty - zd,
            zc,
            zd,
            x,
            t,
            u,
            y: 0.0,
            sc,
            sd,
        }
    }

    fn residuals(&self, it: &Iterate) -> Residuals {
        let w = self.w();
        let xv = DVector::from_column_slice(&it.x);
        let qx = &self.hess * &xv;
        let mut rdx: Vec<f64> = (0..w)
            .map(|i| qx[i] + self.c[i] - it.y - it.zl[i] + it.zh[i])
            .collect();
        let mut zsum = vec![0.0; w];
        self.scatter_rows(&it.zc, &mut zsum);
        for i in 0..w {
            rdx[i] -= zsum[i];
        }
        let cover = self.cover_sum(&it.x);
        let (rdt, rgd) = match &self.disc {
            Some((d, eta)) => {
                for i in 0..w {
                    rdx[i] -= it.zd * d[i];
                }
                (
                    self.disc_penalty - it.zd - it.zt,
                    self.dot_d(&it.x) + it.t - eta - it.sd,
                )
            }
            None => (0.0, 0.0),
        };
        Residuals {
            rdx,
            rdt,
            rdu: it
                .zc
                .iter()
                .zip(&it.zu)
                .map(|(a, b)| self.cover_penalty - a - b)
                .collect(),
            rp: it.x.iter().sum::<f64>() - self.k,
            rgc: (0..self.rows.len())
                .map(|p| cover[p] + it.u[p] - 1.0 - it.sc[p])
                .collect(),
            rgd,
            rgl: it.x.iter().zip(&it.sl).map(|(x, s)| x - s).collect(),
            rgh: it.x.iter().zip(&it.sh).map(|(x, s)| 1.0 - x - s).collect(),
            rgu: it.u.iter().zip(&it.su).map(|(u, s)| u - s).collect(),
            rgt: if self.disc.is_some() { it.t - it.st } else { 0.0 },
        }
    }

    fn complementarity(&self, it: &Iterate) -> f64 {
        let mut sum: f64 = dot(&it.sc, &it.zc)
            + dot(&it.sl, &it.zl)
            + dot(&it.sh, &it.zh)
            + dot(&it.su, &it.zu);
        if self.disc.is_some() {
            sum += it.sd * it.zd + it.st * it.zt;
        }
        sum / self.n_ineq() as f64
    }

    fn kkt(&self, it: &Iterate, r: &Residuals, mu: f64, abs_hess: &DMatrix<f64>) -> f64 {
        let dual = self.relative_dual(it, &r.rdx, abs_hess)
            .max(inf_norm(&r.rdu) / (1.0 + self.cover_penalty))
            .max(r.rdt.abs() / (1.0 + self.disc_penalty));
        let primal = (r.rp.abs() / (1.0 + self.k))
            .max(inf_norm(&r.rgc))
            .max(r.rgd.abs() / (1.0 + self.disc.as_ref().map_or(0.0, |d| d.1)))
            .max(inf_norm(&r.rgl))
            .max(inf_norm(&r.rgh))
            .max(inf_norm(&r.rgu))
            .max(r.rgt.abs());
        let obj = self.objective(&it.x).abs();
        let kkt = dual.max(primal).max(mu / (1.0 + obj));
        if kkt.is_nan() || !obj.is_finite() || !mu.is_finite() {
            f64::INFINITY
        } else {
            kkt
        }
    }

    /// Dual residual of each `x_i` relative to the size of the terms it sums,
    /// so large multipliers on hard rows don't make roundoff look like error.
    fn relative_dual(&self, it: &Iterate, rdx: &[f64], abs_hess: &DMatrix<f64>) -> f64 {
        let xv = DVector::from_column_slice(&it.x);
        let qx = abs_hess * xv.abs();
        let mut mag: Vec<f64> = (0..self.w())
            .map(|i| qx[i] + self.c[i].abs() + it.y.abs() + it.zl[i] + it.zh[i])
            .collect();
        self.scatter_rows(&it.zc, &mut mag);
        if let Some((d, _)) = &self.disc {
            mag.iter_mut().zip(d).for_each(|(m, di)| *m += it.zd * di.abs());
        }
        rdx.iter()
            .zip(&mag)
            .map(|(r, m)| r.abs() / (1.0 + m))
            .fold(0.0, f64::max)
    }

    /// Reduced Newton matrix for the current scaling, factored.
    fn factor(&self, it: &Iterate, groups: &[(&[usize], Vec<usize>)]) -> Factor {
        let w = self.w();
        let mut h = self.hess.clone();
        let eff: Vec<f64> = (0..self.rows.len())
            .map(|p| {
                let wc = it.zc[p] / it.sc[p];
                let wu = it.zu[p] / it.su[p];
                wc * wu / (wc + wu)
            })
            .collect();
        for &(pattern, ref members) in groups {
            let e: f64 = members.iter().map(|&p| eff[p]).sum();
            for &j in pattern {
                for &i in pattern {
                    h[(i, j)] += e;
                }
            }
        }
        if let Some((d, _)) = &self.disc {
            let wd = it.zd / it.sd;
            let wt = it.zt / it.st;
            let eff = wd * wt / (wd + wt);
            for j in 0..w {
                for i in 0..w {
                    h[(i, j)] += eff * d[i] * d[j];
                }
            }
        }
        for i in 0..w {
            h[(i, i)] += it.zl[i] / it.sl[i] + it.zh[i] / it.sh[i];
        }
        Factor::new(h)
    }

    fn solve_newton(
        &self,
        it: &Iterate,
        r: &Residuals,
        comp: &Comp,
        ch: &Factor,
    ) -> Step {
        let w = self.w();
        let n = self.rows.len();
        // q = S⁻¹ r_sz + W r_g for every inequality
        let qc: Vec<f64> = (0..n)
            .map(|p| (comp.c[p] + it.zc[p] * r.rgc[p]) / it.sc[p])
            .collect();
        let ql: Vec<f64> = (0..w)
            .map(|i| (comp.l[i] + it.zl[i] * r.rgl[i]) / it.sl[i])
            .collect();
        let qh: Vec<f64> = (0..w)
            .map(|i| (comp.h[i] + it.zh[i] * r.rgh[i]) / it.sh[i])
            .collect();
        let qu: Vec<f64> = (0..n)
            .map(|p| (comp.u[p] + it.zu[p] * r.rgu[p]) / it.su[p])
            .collect();

        let mut rhs_x: Vec<f64> = (0..w).map(|i| -r.rdx[i] - ql[i] + qh[i]).collect();
        let rhs_u: Vec<f64> = (0..n).map(|p| -r.rdu[p] - qc[p] - qu[p]).collect();
        let wc: Vec<f64> = (0..n).map(|p| it.zc[p] / it.sc[p]).collect();
        let huu: Vec<f64> = (0..n).map(|p| wc[p] + it.zu[p] / it.su[p]).collect();
        // -Aᵀ qc, then eliminate u
        let fold: Vec<f64> = (0..n)
            .map(|p| -qc[p] - wc[p] / huu[p] * rhs_u[p])
            .collect();
        self.scatter_rows(&fold, &mut rhs_x);

        let mut disc_terms = None;
        if let Some((d, _)) = &self.disc {
            let qd = (comp.d + it.zd * r.rgd) / it.sd;
            let qt = (comp.t + it.zt * r.rgt) / it.st;
            let rhs_t = -r.rdt - qd - qt;
            let wd = it.zd / it.sd;
            let htt = wd + it.zt / it.st;
            for i in 0..w {
                rhs_x[i] += (-qd - wd / htt * rhs_t) * d[i];
            }
            disc_terms = Some((rhs_t, wd, htt));
        }

        let a = ch.solve(DVector::from_vec(rhs_x));
        let b = ch.solve(DVector::from_element(w, 1.0));
        let dy = (-r.rp - a.sum()) / b.sum();
        let dx: Vec<f64> = (0..w).map(|i| a[i] + b[i] * dy).collect();

        let adx = self.cover_sum(&dx);
        let du: Vec<f64> = (0..n)
            .map(|p| (rhs_u[p] - wc[p] * adx[p]) / huu[p])
            .collect();
        let (dt, gd) = match (&self.disc, disc_terms) {
            (Some((d, _)), Some((rhs_t, wd, htt))) => {
                let ddx: f64 = dot(d, &dx);
                let dt = (rhs_t - wd * ddx) / htt;
                (dt, ddx + dt)
            }
            _ => (0.0, 0.0),
        };

        // Δs = GΔv + r_g;  Δz = (-r_sz - z Δs) / s
        let dsc: Vec<f64> = (0..n).map(|p| adx[p] + du[p] + r.rgc[p]).collect();
        let dsl: Vec<f64> = (0..w).map(|i| dx[i] + r.rgl[i]).collect();
        let dsh: Vec<f64> = (0..w).map(|i| -dx[i] + r.rgh[i]).collect();
        let dsu: Vec<f64> = (0..n).map(|p| du[p] + r.rgu[p]).collect();
        let dz = |rsz: f64, z: f64, ds: f64, s: f64| (-rsz - z * ds) / s;
        let (dsd, dzd, dst, dzt) = if self.disc.is_some() {
            let dsd = gd + r.rgd;
            let dst = dt + r.rgt;
            (
                dsd,
                dz(comp.d, it.zd, dsd, it.sd),
                dst,
                dz(comp.t, it.zt, dst, it.st),
            )
        } else {
            (0.0, 0.0, 0.0, 0.0)
        };
        Step {
            zc: (0..n).map(|p| dz(comp.c[p], it.zc[p], dsc[p], it.sc[p])).collect(),
            zl: (0..w).map(|i| dz(comp.l[i], it.zl[i], dsl[i], it.sl[i])).collect(),
            zh: (0..w).map(|i| dz(comp.h[i], it.zh[i], dsh[i], it.sh[i])).collect(),
            zu: (0..n).map(|p| dz(comp.u[p], it.zu[p], dsu[p], it.su[p])).collect(),
            x: dx,
            t: dt,
            u: du,
            y: dy,
            sc: dsc,
            sd: dsd,
            zd: dzd,
            sl: dsl,
            sh: dsh,
            su: dsu,
            st: dst,
            zt: dzt,
        }
    }

    fn max_step(&self, it: &Iterate, st: &Step) -> f64 {
        let mut alpha: f64 = 1.0;
        let mut limit = |v: &[f64], dv: &[f64]| {
            for (a, b) in v.iter().zip(dv) {
                if *b < 0.0 {
                    alpha = alpha.min(-a / b);
                }
            }
        };
        limit(&it.sc, &st.sc);
        limit(&it.zc, &st.zc);
        limit(&it.sl, &st.sl);
        limit(&it.zl, &st.zl);
        limit(&it.sh, &st.sh);
        limit(&it.zh, &st.zh);
        limit(&it.su, &st.su);
        limit(&it.zu, &st.zu);
        if self.disc.is_some() {
            limit(
                &[it.sd, it.zd, it.st, it.zt],
                &[st.sd, st.zd, st.st, st.zt],
            );
        }
        alpha
    }

    fn comp_after(&self, it: &Iterate, st: &Step, a: f64) -> f64 {
        let pair = |s: &[f64], ds: &[f64], z: &[f64], dz: &[f64]| -> f64 {
            (0..s.len())
                .map(|i| (s[i] + a * ds[i]) * (z[i] + a * dz[i]))
                .sum()
        };
        let mut sum = pair(&it.sc, &st.sc, &it.zc, &st.zc)
            + pair(&it.sl, &st.sl, &it.zl, &st.zl)
            + pair(&it.sh, &st.sh, &it.zh, &st.zh)
            + pair(&it.su, &st.su, &it.zu, &st.zu);
        if self.disc.is_some() {
            sum += (it.sd + a * st.sd) * (it.zd + a * st.zd)
                + (it.st + a * st.st) * (it.zt + a * st.zt);
        }
        sum / self.n_ineq() as f64
    }

    pub fn solve(&self, warm: Option<&[f64]>, tol: f64, max_iters: usize) -> IpmSolution {
        let mut it = self.start(warm);
        let abs_hess = self.hess.abs();
        let groups = self.row_groups();
        let mut best: Option<(f64, Iterate)> = None;
        let mut best_at = 0;
        let mut iters = 0;
        let mut converged = false;
        let mut kkt = loop {
            let r = self.residuals(&it);
            let mu = self.complementarity(&it);
            let kkt = self.kkt(&it, &r, mu, &abs_hess);
            if best.as_ref().is_none_or(|(b, _)| kkt < *b) {
                best = Some((kkt, it.clone()));
                best_at = iters;
            }
            if kkt <= tol {
                converged = true;
                break kkt;
            }
            if iters >= max_iters || !kkt.is_finite() || iters - best_at >= STALL_ITERS {
                break kkt;
            }
            iters += 1;
            let ch = self.factor(&it, &groups);

            let affine = Comp {
                c: mul(&it.sc, &it.zc),
                d: it.sd * it.zd,
                l: mul(&it.sl, &it.zl),
                h: mul(&it.sh, &it.zh),
                u: mul(&it.su, &it.zu),
                t: it.st * it.zt,
            };
            let aff = self.solve_newton(&it, &r, &affine, &ch);
            let a_aff = self.max_step(&it, &aff);
            let mu_aff = self.comp_after(&it, &aff, a_aff);
            let sigma = (mu_aff / mu).powi(3).min(1.0);
            let sm = sigma * mu;
            let corr = |s: &[f64], z: &[f64], ds: &[f64], dz: &[f64]| -> Vec<f64> {
                (0..s.len()).map(|i| s[i] * z[i] + ds[i] * dz[i] - sm).collect()
            };
            let comp = Comp {
                c: corr(&it.sc, &it.zc, &aff.sc, &aff.zc),
                d: it.sd * it.zd + aff.sd * aff.zd - sm,
                l: corr(&it.sl, &it.zl, &aff.sl, &aff.zl),
                h: corr(&it.sh, &it.zh, &aff.sh, &aff.zh),
                u: corr(&it.su, &it.zu, &aff.su, &aff.zu),
                t: it.st * it.zt + aff.st * aff.zt - sm,
            };
            let step = self.solve_newton(&it, &r, &comp, &ch);
            let alpha = (0.995 * self.max_step(&it, &step)).min(1.0);
            apply(&mut it, &step, alpha, self.disc.is_some());
        };
        if !converged {
            it = best.expect("at least one iterate").1;
            let r = self.residuals(&it);
            kkt = self.kkt(&it, &r, self.complementarity(&it), &abs_hess);
            converged = kkt <= (NEAR_FACTOR * tol).max(ROUNDOFF_FLOOR);
        }
        IpmSolution {
            objective: self.objective(&it.x),
            x: it.x,
            t: it.t,
            u: it.u,
            y: it.y,
            z_cover: it.zc,
            z_disc: it.zd,
            iters,
            kkt,
            converged,
        }
    }
}

/// Cholesky factor of a Jacobi-scaled positive semidefinite matrix. Pivots that
/// cancel to roundoff are lifted to a small floor, a proximal regularization that
/// keeps steps along near-null directions bounded. Solves are polished by
/// iterative refinement against the unmodified matrix.
struct Factor {
    l: DMatrix<f64>,
    inv_sqrt_diag: DVector<f64>,
    orig: DMatrix<f64>,
}

impl Factor {
    const PIVOT_TOL: f64 = 1e-14;
    const REG_PIVOT: f64 = 1e-12;
    const BLOCK: usize = 64;

    fn new(mut m: DMatrix<f64>) -> Self {
        let orig = m.clone();
        let n = m.nrows();
        let inv_sqrt_diag = DVector::from_iterator(
            n,
            (0..n).map(|i| {
                let v = m[(i, i)];
                if v > 0.0 {
                    1.0 / v.sqrt()
                } else {
                    1.0
                }
            }),
        );
        for j in 0..n {
            for i in j..n {
                m[(i, j)] *= inv_sqrt_diag[i] * inv_sqrt_diag[j];
            }
        }
        for j0 in (0..n).step_by(Self::BLOCK) {
            let j1 = (j0 + Self::BLOCK).min(n);
            for j in j0..j1 {
                for k in j0..j {
                    let f = m[(j, k)];
                    if f != 0.0 {
                        let (mut cj, ck) = m.columns_range_pair_mut(j, k);
                        cj.rows_range_mut(j..).axpy(-f, &ck.rows_range(j..), 1.0);
                    }
                }
                let piv = m[(j, j)];
                let root = if piv > Self::PIVOT_TOL { piv } else { Self::REG_PIVOT }.sqrt();
                m[(j, j)] = root;
                m.view_range_mut(j + 1.., j).iter_mut().for_each(|v| *v /= root);
            }
            if j1 == n {
                break;
            }
            // lower part of the trailing block, one column block at a time
            let panel = m.view_range(j1.., j0..j1).clone_owned();
            for c0 in (j1..n).step_by(Self::BLOCK) {
                let c1 = (c0 + Self::BLOCK).min(n);
                let right = panel.rows_range(c0 - j1..c1 - j1).transpose();
                m.view_range_mut(c0.., c0..c1)
                    .gemm(-1.0, &panel.rows_range(c0 - j1..), &right, 1.0);
            }
        }
        Self { l: m, inv_sqrt_diag, orig }
    }

    fn solve(&self, b: DVector<f64>) -> DVector<f64> {
        let mut x = self.solve_once(b.clone());
        let mut r = &b - &self.orig * &x;
        for _ in 0..2 {
            let cand = &x + self.solve_once(r.clone());
            let rc = &b - &self.orig * &cand;
            if !(rc.amax() < r.amax()) {
                break;
            }
            x = cand;
            r = rc;
        }
        x
    }

    fn solve_once(&self, mut b: DVector<f64>) -> DVector<f64> {
        b.component_mul_assign(&self.inv_sqrt_diag);
        self.l.solve_lower_triangular_mut(&mut b);
        self.l.tr_solve_lower_triangular_mut(&mut b);
        b.component_mul_assign(&self.inv_sqrt_diag);
        b
    }
}

fn apply(it: &mut Iterate, st: &Step, a: f64, disc: bool) {
    let upd = |v: &mut [f64], dv: &[f64]| v.iter_mut().zip(dv).for_each(|(x, d)| *x += a * d);
    upd(&mut it.x, &st.x);
    upd(&mut it.u, &st.u);
    upd(&mut it.sc, &st.sc);
    upd(&mut it.zc, &st.zc);
    upd(&mut it.sl, &st.sl);
    upd(&mut it.zl, &st.zl);
    upd(&mut it.sh, &st.sh);
    upd(&mut it.zh, &st.zh);
    upd(&mut it.su, &st.su);
    upd(&mut it.zu, &st.zu);
    it.y += a * st.y;
    if disc {
        it.t += a * st.t;
        it.sd += a * st.sd;
        it.zd += a * st.zd;
        it.st += a * st.st;
        it.zt += a * st.zt;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
