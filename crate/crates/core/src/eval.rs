//! Comparison metrics and the evidence-accumulation consensus baseline.

use nalgebra::DMatrix;
use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use petgraph::unionfind::UnionFind;

use crate::data::{Dataset, Partition};
use crate::error::{Result, SceError};

/// Fraction of partitions in which each pair of points shares a cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct CoAssociationMatrix {
    s: DMatrix<f64>,
    m_partitions: usize,
}

impl CoAssociationMatrix {
    pub fn n(&self) -> usize {
        self.s.nrows()
    }

    pub fn m_partitions(&self) -> usize {
        self.m_partitions
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.s[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }
}

pub fn co_association(partitions: &[&Partition]) -> Result<CoAssociationMatrix> {
    let Some(first) = partitions.first() else {
        return Err(SceError::SizeMismatch { expected: 1, got: 0 });
    };
    let n = first.n();
    if let Some(p) = partitions.iter().find(|p| p.n() != n) {
        return Err(SceError::SizeMismatch {
            expected: n,
            got: p.n(),
        });
    }
    let mut counts = vec![0u32; n * n];
    for p in partitions {
        for members in p.clusters() {
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a..] {
                    counts[i * n + j] += 1;
                    if i != j {
                        counts[j * n + i] += 1;
                    }
                }
            }
        }
    }
    let m = partitions.len() as f64;
    Ok(CoAssociationMatrix {
        s: DMatrix::from_fn(n, n, |i, j| f64::from(counts[i * n + j]) / m),
        m_partitions: partitions.len(),
    })
}

/// Single-link clustering on `1 - S`, cut where `k` components remain.
/// Equal dissimilarities merge in lexicographic `(i, j)` order.
pub fn eac_single_link(s: &CoAssociationMatrix, dataset: &Dataset, k: usize) -> Result<Partition> {
    let n = s.n();
    if dataset.n() != n {
        return Err(SceError::SizeMismatch {
            expected: n,
            got: dataset.n(),
        });
    }
    if k == 0 || k > n {
        return Err(SceError::KExceedsN { k, n });
    }
    let mut edges: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (1.0 - s.get(i, j), i, j))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut uf = UnionFind::<usize>::new(n);
    let mut components = n;
    for &(_, i, j) in &edges {
        if components == k {
            break;
        }
        if uf.union(i, j) {
            components -= 1;
        }
    }
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    let labels: Vec<usize> = (0..n)
        .map(|i| {
            let r = uf.find(i);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            ids[r]
        })
        .collect();
    Partition::from_labels(dataset, &labels)
}

/// Best matched fraction over one-to-one cluster-to-class assignments.
pub fn clustering_accuracy(predicted: &Partition, truth: &[usize]) -> Result<f64> {
    let n = predicted.n();
    if truth.len() != n {
        return Err(SceError::SizeMismatch {
            expected: n,
            got: truth.len(),
        });
    }
    let mut classes: Vec<usize> = truth.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let size = predicted.k().max(classes.len());
    let mut table = Matrix::new(size, size, 0i64);
    for (&p, t) in predicted.labels().iter().zip(truth) {
        let c = classes.binary_search(t).expect("class present");
        table[(p, c)] += 1;
    }
    let (matched, _) = kuhn_munkres(&table);
    Ok(matched as f64 / n as f64)
}

/// Percentage by which `r1` improves on the reference `r2`.
pub fn relative_error(r1: f64, r2: f64) -> Result<f64> {
    if !(r2 > 0.0) {
        return Err(SceError::NonpositiveReference(r2));
    }
    Ok((r2 - r1) / r2 * 100.0)
}
