//! Core value types: the point set, candidate clusters, the candidate pool and
//! hard partitions, together with the squared-error cost they all share.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::error::{Result, SceError};

/// Relative tolerance used by invariant checks, with an absolute floor.
pub const REL_TOL: f64 = 1e-9;
pub const ABS_TOL: f64 = 1e-12;

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= ABS_TOL.max(REL_TOL * a.abs().max(b.abs()))
}

#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// n points in d dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n: usize,
    d: usize,
}

impl Dataset {
    pub fn new(values: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(SceError::EmptyDataset);
        }
        if values.len() != n * d {
            return Err(SceError::SizeMismatch {
                expected: n * d,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(SceError::NonFiniteCoordinate {
                row: pos / d,
                col: pos % d,
            });
        }
        Ok(Self { values, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * d);
        for r in rows {
            let r = r.as_ref();
            if r.len() != d {
                return Err(SceError::DimensionMismatch {
                    expected: d,
                    got: r.len(),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(values, rows.len(), d)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d)
    }

    /// Mean of the given points.
    pub fn mean_of(&self, members: &[usize]) -> Vec<f64> {
        let mut m = vec![0.0; self.d];
        for &i in members {
            for (acc, v) in m.iter_mut().zip(self.point(i)) {
                *acc += v;
            }
        }
        let inv = 1.0 / members.len() as f64;
        m.iter_mut().for_each(|v| *v *= inv);
        m
    }
}

/// Which per-cluster cost enters the set-covering objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostKind {
    /// Sum of squared distances to the centroid (the MSSC contribution).
    #[default]
    Squared,
    /// Sum of plain Euclidean distances to the centroid.
    Unsquared,
}

impl std::str::FromStr for CostKind {
    type Err = SceError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(Self::Squared),
            "unsquared" => Ok(Self::Unsquared),
            other => Err(SceError::InvalidConfig(format!("unknown cost kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for CostKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Squared => "squared",
            Self::Unsquared => "unsquared",
        })
    }
}

/// A subset of points with its centroid and costs cached.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateCluster {
    members: Vec<usize>,
    centroid: Vec<f64>,
    cost: f64,
    unsquared_cost: f64,
    min_inter_distance: f64,
}

impl CandidateCluster {
    /// Builds a candidate from an arbitrary (unsorted, possibly repeated) index list.
    pub fn from_members(dataset: &Dataset, members: &[usize]) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        Self::from_sorted(dataset, members)
    }

    pub(crate) fn from_sorted(dataset: &Dataset, members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(SceError::EmptyCluster);
        }
        if let Some(&bad) = members.iter().find(|&&i| i >= dataset.n()) {
            return Err(SceError::IndexOutOfRange {
                index: bad,
                n: dataset.n(),
            });
        }
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let centroid = dataset.mean_of(&members);
        let (mut cost, mut unsquared_cost) = (0.0, 0.0);
        for &i in &members {
            let s = sq_dist(dataset.point(i), &centroid);
            cost += s;
            unsquared_cost += s.sqrt();
        }
        Ok(Self {
            members,
            centroid,
            cost,
            unsquared_cost,
            min_inter_distance: f64::INFINITY,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn centroid(&self) -> &[f64] {
        &self.centroid
    }

    /// Sum of squared distances of members to the centroid.
    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn unsquared_cost(&self) -> f64 {
        self.unsquared_cost
    }

    pub fn cost_of(&self, kind: CostKind) -> f64 {
        match kind {
            CostKind::Squared => self.cost,
            CostKind::Unsquared => self.unsquared_cost,
        }
    }

    /// Minimum centroid distance to any other candidate in the pool, +inf until computed.
    pub fn min_inter_distance(&self) -> f64 {
        self.min_inter_distance
    }

    pub(crate) fn set_min_inter_distance(&mut self, v: f64) {
        self.min_inter_distance = v;
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

fn member_hash(members: &[usize]) -> u64 {
    let mut h = DefaultHasher::new();
    members.hash(&mut h);
    h.finish()
}

/// The growing collection of candidate clusters, stored column-wise as member sets.
#[derive(Debug, Clone)]
pub struct CandidatePool {
    n: usize,
    d: usize,
    clusters: Vec<CandidateCluster>,
    by_hash: HashMap<u64, Vec<usize>>,
}

impl CandidatePool {
    pub fn new(dataset: &Dataset) -> Self {
        Self {
            n: dataset.n(),
            d: dataset.d(),
            clusters: Vec::new(),
            by_hash: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[CandidateCluster] {
        &self.clusters
    }

    pub fn get(&self, i: usize) -> &CandidateCluster {
        &self.clusters[i]
    }

    pub(crate) fn clusters_mut(&mut self) -> &mut [CandidateCluster] {
        &mut self.clusters
    }

    pub fn position(&self, members: &[usize]) -> Option<usize> {
        self.by_hash
            .get(&member_hash(members))?
            .iter()
            .copied()
            .find(|&i| self.clusters[i].members == members)
    }

    /// Appends the cluster unless an identical member set is already present.
    pub fn add(&mut self, cluster: CandidateCluster) -> Result<bool> {
        if cluster.centroid.len() != self.d || cluster.members.last().is_some_and(|&m| m >= self.n)
        {
            return Err(SceError::DatasetMismatch {
                n: self.n,
                d: self.d,
            });
        }
        let h = member_hash(&cluster.members);
        let bucket = self.by_hash.entry(h).or_default();
        if bucket
            .iter()
            .any(|&i| self.clusters[i].members == cluster.members)
        {
            return Ok(false);
        }
        bucket.push(self.clusters.len());
        self.clusters.push(cluster);
        Ok(true)
    }

    /// Adds every cluster of a partition; returns how many were new.
    pub fn add_partition(&mut self, dataset: &Dataset, partition: &Partition) -> Result<usize> {
        let mut added = 0;
        for members in partition.clusters() {
            if self.add(CandidateCluster::from_sorted(dataset, members)?)? {
                added += 1;
            }
        }
        Ok(added)
    }

    /// For every point, the indices of the candidates containing it.
    pub fn coverage(&self) -> Vec<Vec<usize>> {
        let mut cover = vec![Vec::new(); self.n];
        for (j, c) in self.clusters.iter().enumerate() {
            for &p in &c.members {
                cover[p].push(j);
            }
        }
        cover
    }

    /// First point not covered by any candidate, if any.
    pub fn first_uncovered(&self) -> Option<usize> {
        let mut seen = vec![false; self.n];
        for c in &self.clusters {
            for &p in &c.members {
                seen[p] = true;
            }
        }
        seen.iter().position(|s| !s)
    }
}

/// A hard assignment of every point to one of k nonempty clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
    mssc: f64,
}

impl Partition {
    /// Builds a partition, compacting unused label ids to a dense `0..k` range
    /// while keeping their relative order.
    pub fn from_labels(dataset: &Dataset, labels: &[usize]) -> Result<Self> {
        if labels.len() != dataset.n() {
            return Err(SceError::LabelLengthMismatch {
                expected: dataset.n(),
                got: labels.len(),
            });
        }
        let mut ids: Vec<usize> = labels.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let labels: Vec<usize> = if ids.last() == Some(&(ids.len() - 1)) {
            labels.to_vec()
        } else {
            labels
                .iter()
                .map(|l| ids.binary_search(l).expect("id present"))
                .collect()
        };
        let k = ids.len();
        let mssc = mssc_of_labels(dataset, &labels, k);
        Ok(Self { labels, k, mssc })
    }

    /// Caller guarantees labels lie in `0..k` and every id is used.
    pub(crate) fn from_dense_labels(dataset: &Dataset, labels: Vec<usize>, k: usize) -> Self {
        debug_assert!(labels.iter().all(|&l| l < k));
        let mssc = mssc_of_labels(dataset, &labels, k);
        Self { labels, k, mssc }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn mssc(&self) -> f64 {
        self.mssc
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Sorted member lists, one per cluster id.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn centroids(&self, dataset: &Dataset) -> Vec<Vec<f64>> {
        centroids_of_labels(dataset, &self.labels, self.k)
    }
}

pub(crate) fn centroids_of_labels(dataset: &Dataset, labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let d = dataset.d();
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (acc, v) in sums[l].iter_mut().zip(dataset.point(i)) {
            *acc += v;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            let inv = 1.0 / c as f64;
            s.iter_mut().for_each(|v| *v *= inv);
        }
    }
    sums
}

pub(crate) fn mssc_of_labels(dataset: &Dataset, labels: &[usize], k: usize) -> f64 {
    let centroids = centroids_of_labels(dataset, labels, k);
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(dataset.point(i), &centroids[l]))
        .sum()
}

/// Sum over clusters of the squared distances of members to their centroid.
pub fn mssc(dataset: &Dataset, partition: &Partition) -> f64 {
    mssc_of_labels(dataset, partition.labels(), partition.k())
}
