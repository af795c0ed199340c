//! Manifold regularization over candidate clusters: heat-kernel similarity of
//! centroids, the graph Laplacian `L = D - W`, and the discriminative
//! distances used by the dispersion constraint.
//!
//! The adjacency is a kernel matrix fully determined by the centroids and the
//! bandwidth, so entries are evaluated on demand and only the degree vector is
//! stored. Dense materializations are available for small pools.

use nalgebra::DMatrix;

use crate::data::{dist, sq_dist, CandidatePool, Dataset, Partition};
use crate::error::{Result, SceError};

#[derive(Debug, Clone)]
pub struct ClusterGraph {
    centroids: Vec<f64>,
    dim: usize,
    q: usize,
    sigma: f64,
    degree: Vec<f64>,
}

impl ClusterGraph {
    /// Heat-kernel adjacency `W_ij = exp(-|m_i - m_j|² / sigma)` over the pool's centroids.
    pub fn heat_kernel(pool: &CandidatePool, sigma: f64) -> Result<Self> {
        let centroids: Vec<&[f64]> = pool.clusters().iter().map(|c| c.centroid()).collect();
        Self::from_centroids(&centroids, sigma)
    }

    pub fn from_centroids<C: AsRef<[f64]>>(centroids: &[C], sigma: f64) -> Result<Self> {
        let q = centroids.len();
        if q < 2 {
            return Err(SceError::SingleCandidate);
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(SceError::NonpositiveSigma(sigma));
        }
        let dim = centroids[0].as_ref().len();
        let flat: Vec<f64> = centroids
            .iter()
            .flat_map(|c| c.as_ref().iter().copied())
            .collect();
        let mut g = Self {
            centroids: flat,
            dim,
            q,
            sigma,
            degree: vec![1.0; q],
        };
        for i in 0..q {
            for j in (i + 1)..q {
                let w = g.weight(i, j);
                g.degree[i] += w;
                g.degree[j] += w;
            }
        }
        Ok(g)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn degree(&self) -> &[f64] {
        &self.degree
    }

    #[inline]
    fn centroid(&self, i: usize) -> &[f64] {
        &self.centroids[i * self.dim..(i + 1) * self.dim]
    }

    /// Adjacency entry; symmetric by construction, `W_ii = 1`.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        (-sq_dist(self.centroid(a), self.centroid(b)) / self.sigma).exp()
    }

    #[inline]
    pub fn laplacian_entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.degree[i] - 1.0
        } else {
            -self.weight(i, j)
        }
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.q, self.q, |i, j| self.weight(i, j))
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.q, self.q, |i, j| self.laplacian_entry(i, j))
    }

    /// `L x` without materializing `L`.
    pub fn laplacian_times(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        // W_ii = 1 is part of both D_ii and W, so it cancels out of L.
        let mut out: Vec<f64> = self
            .degree
            .iter()
            .zip(x)
            .map(|(d, v)| (d - 1.0) * v)
            .collect();
        for i in 0..self.q {
            for j in (i + 1)..self.q {
                let w = self.weight(i, j);
                out[i] -= w * x[j];
                out[j] -= w * x[i];
            }
        }
        Ok(out)
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.q {
            return Err(SceError::DimensionMismatch {
                expected: self.q,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// `xᵀ L x` for the graph's Laplacian.
pub fn laplacian_quadratic(graph: &ClusterGraph, x: &[f64]) -> Result<f64> {
    let lx = graph.laplacian_times(x)?;
    Ok(x.iter().zip(&lx).map(|(a, b)| a * b).sum())
}

/// Median of the squared pairwise centroid distances.
pub fn default_sigma(pool: &CandidatePool) -> Result<f64> {
    let centroids: Vec<&[f64]> = pool.clusters().iter().map(|c| c.centroid()).collect();
    sigma_from_centroids(&centroids)
}

pub fn sigma_from_centroids<C: AsRef<[f64]>>(centroids: &[C]) -> Result<f64> {
    let q = centroids.len();
    if q < 2 {
        return Err(SceError::SingleCandidate);
    }
    let pairs = PairDistances { centroids };
    let m = q * (q - 1) / 2;
    let median = 0.5 * (pairs.kth(m, (m - 1) / 2) + pairs.kth(m, m / 2));
    if median > 0.0 {
        return Ok(median);
    }
    // More than half the pairs coincide; fall back to the smallest positive distance.
    let mut smallest = f64::INFINITY;
    pairs.for_each(|v| {
        if v > 0.0 && v < smallest {
            smallest = v;
        }
    });
    if smallest.is_finite() {
        Ok(smallest)
    } else {
        Err(SceError::DegeneratePool)
    }
}

struct PairDistances<'a, C> {
    centroids: &'a [C],
}

impl<C: AsRef<[f64]>> PairDistances<'_, C> {
    const DIRECT_LIMIT: usize = 1 << 22;
    const BINS: usize = 1 << 14;

    fn for_each(&self, mut f: impl FnMut(f64)) {
        let c = self.centroids;
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                f(sq_dist(c[i].as_ref(), c[j].as_ref()));
            }
        }
    }

    /// Exact k-th smallest of the `m` pairwise values, using bounded memory.
    fn kth(&self, m: usize, k: usize) -> f64 {
        if m <= Self::DIRECT_LIMIT {
            let mut all = Vec::with_capacity(m);
            self.for_each(|v| all.push(v));
            return *all.select_nth_unstable_by(k, f64::total_cmp).1;
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        self.for_each(|v| {
            lo = lo.min(v);
            hi = hi.max(v);
        });
        // Invariant: the answer lies in [lo, hi] and `below` values are < lo.
        let mut below = 0usize;
        loop {
            if lo == hi {
                return lo;
            }
            let width = hi - lo;
            let bin = |v: f64| (((v - lo) / width * Self::BINS as f64) as usize).min(Self::BINS - 1);
            let mut counts = vec![0usize; Self::BINS];
            let mut mins = vec![f64::INFINITY; Self::BINS];
            let mut maxs = vec![f64::NEG_INFINITY; Self::BINS];
            self.for_each(|v| {
                if v >= lo && v <= hi {
                    let b = bin(v);
                    counts[b] += 1;
                    mins[b] = mins[b].min(v);
                    maxs[b] = maxs[b].max(v);
                }
            });
            let mut acc = below;
            let mut target = 0;
            for (b, &c) in counts.iter().enumerate() {
                if acc + c > k {
                    target = b;
                    break;
                }
                acc += c;
            }
            below = acc;
            lo = mins[target];
            hi = maxs[target];
            if counts[target] <= Self::DIRECT_LIMIT {
                let mut vals = Vec::with_capacity(counts[target]);
                self.for_each(|v| {
                    if v >= lo && v <= hi {
                        vals.push(v);
                    }
                });
                return *vals.select_nth_unstable_by(k - below, f64::total_cmp).1;
            }
        }
    }
}

/// Per-candidate minimum centroid distance to any other candidate, plus the
/// dispersion threshold derived from a single base partition.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminativeData {
    pub d: Vec<f64>,
    pub theta: f64,
    pub eta: f64,
}

/// `d_i = min_{j != i} |m_i - m_j|`, also stored on each candidate.
pub fn discriminative_distances(pool: &mut CandidatePool) -> Result<Vec<f64>> {
    let q = pool.q();
    if q < 2 {
        return Err(SceError::SingleCandidate);
    }
    let mut d2 = vec![f64::INFINITY; q];
    {
        let cl = pool.clusters();
        for i in 0..q {
            for j in (i + 1)..q {
                let s = sq_dist(cl[i].centroid(), cl[j].centroid());
                if s < d2[i] {
                    d2[i] = s;
                }
                if s < d2[j] {
                    d2[j] = s;
                }
            }
        }
    }
    let d: Vec<f64> = d2.into_iter().map(f64::sqrt).collect();
    for (c, &v) in pool.clusters_mut().iter_mut().zip(&d) {
        c.set_min_inter_distance(v);
    }
    Ok(d)
}

/// `theta` is the smallest centroid distance within `first_partition`;
/// `eta = scale * k * theta`.
pub fn estimate_eta(
    first_partition: &Partition,
    dataset: &Dataset,
    k: usize,
    scale: f64,
) -> Result<(f64, f64)> {
    if first_partition.k() < 2 {
        return Err(SceError::SingleClusterPartition);
    }
    let cs = first_partition.centroids(dataset);
    let mut theta = f64::INFINITY;
    for i in 0..cs.len() {
        for j in (i + 1)..cs.len() {
            theta = theta.min(dist(&cs[i], &cs[j]));
        }
    }
    Ok((theta, scale * k as f64 * theta))
}
