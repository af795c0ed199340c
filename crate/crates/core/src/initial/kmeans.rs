//! Lloyd's algorithm and its seeding schemes.

use rand::Rng;

use crate::data::{centroids_of_labels, sq_dist, Dataset, Partition};
use crate::error::{Result, SceError};

/// Nearest-center assignment; ties go to the lowest center index.
pub(crate) fn assign<C: AsRef<[f64]>>(dataset: &Dataset, centers: &[C]) -> Vec<usize> {
    dataset
        .points()
        .map(|x| nearest(x, centers).0)
        .collect()
}

#[inline]
pub(crate) fn nearest<C: AsRef<[f64]>>(x: &[f64], centers: &[C]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let s = sq_dist(x, c.as_ref());
        if s < best.1 {
            best = (j, s);
        }
    }
    best
}

/// Fills every empty cluster with the point farthest from its current centroid,
/// taken from clusters that keep at least one member. Ties go to the lowest index.
pub(crate) fn repair_empty(dataset: &Dataset, labels: &mut [usize], k: usize) {
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let centroids = centroids_of_labels(dataset, labels, k);
        let mut best: Option<(usize, f64)> = None;
        for (i, &l) in labels.iter().enumerate() {
            if sizes[l] < 2 {
                continue;
            }
            let s = sq_dist(dataset.point(i), &centroids[l]);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        // k <= n guarantees a donor cluster with two or more members exists.
        let (i, _) = best.expect("k <= n");
        labels[i] = empty;
    }
}

/// Result of a Lloyd run, with the MSSC recorded after every assignment.
#[derive(Debug, Clone)]
pub struct KMeansRun {
    pub partition: Partition,
    pub iterations: usize,
    pub trace: Vec<f64>,
}

/// Lloyd iterations from the given centers until the assignment is a fixed point
/// or `max_iters` center updates have been made.
pub fn kmeans<C: AsRef<[f64]>>(
    dataset: &Dataset,
    initial_centers: &[C],
    max_iters: usize,
) -> Result<Partition> {
    kmeans_traced(dataset, initial_centers, max_iters).map(|r| r.partition)
}

pub fn kmeans_traced<C: AsRef<[f64]>>(
    dataset: &Dataset,
    initial_centers: &[C],
    max_iters: usize,
) -> Result<KMeansRun> {
    let k = initial_centers.len();
    if k == 0 {
        return Err(SceError::InvalidConfig("kmeans needs at least one center".into()));
    }
    if k > dataset.n() {
        return Err(SceError::KExceedsN { k, n: dataset.n() });
    }
    if let Some(c) = initial_centers.iter().find(|c| c.as_ref().len() != dataset.d()) {
        return Err(SceError::DimensionMismatch {
            expected: dataset.d(),
            got: c.as_ref().len(),
        });
    }
    let mut labels = assign(dataset, initial_centers);
    repair_empty(dataset, &mut labels, k);
    let mut partition = Partition::from_dense_labels(dataset, labels, k);
    let mut trace = vec![partition.mssc()];
    let mut iterations = 0;
    for _ in 0..max_iters.max(1) {
        iterations += 1;
        let centroids = partition.centroids(dataset);
        let mut next = assign(dataset, &centroids);
        repair_empty(dataset, &mut next, k);
        if next == partition.labels() {
            break;
        }
        partition = Partition::from_dense_labels(dataset, next, k);
        trace.push(partition.mssc());
    }
    Ok(KMeansRun {
        partition,
        iterations,
        trace,
    })
}

fn check_k(dataset: &Dataset, k: usize) -> Result<()> {
    if k == 0 {
        return Err(SceError::InvalidConfig("k must be at least 1".into()));
    }
    if k > dataset.n() {
        return Err(SceError::KExceedsN { k, n: dataset.n() });
    }
    Ok(())
}

/// k-means++ seeding: indices of k distinct points chosen by D² sampling.
pub fn kmeans_pp_indices<R: Rng + ?Sized>(
    dataset: &Dataset,
    k: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    check_k(dataset, k)?;
    let n = dataset.n();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut taken = vec![false; n];
    taken[chosen[0]] = true;
    let mut dist2: Vec<f64> = dataset
        .points()
        .map(|x| sq_dist(x, dataset.point(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = dist2.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &w) in dist2.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                pick = Some(i);
                if u < w {
                    break;
                }
                u -= w;
            }
            pick.expect("positive total weight")
        } else {
            // All remaining points coincide with chosen centers.
            let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        taken[pick] = true;
        chosen.push(pick);
        let c = dataset.point(pick);
        for (i, d) in dist2.iter_mut().enumerate() {
            *d = d.min(sq_dist(dataset.point(i), c));
        }
        dist2[pick] = 0.0;
    }
    Ok(chosen)
}

pub fn kmeans_pp_init<R: Rng + ?Sized>(
    dataset: &Dataset,
    k: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    Ok(kmeans_pp_indices(dataset, k, rng)?
        .into_iter()
        .map(|i| dataset.point(i).to_vec())
        .collect())
}

/// Forgy seeding: k distinct points drawn uniformly.
pub fn random_init<R: Rng + ?Sized>(
    dataset: &Dataset,
    k: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    check_k(dataset, k)?;
    Ok(rand::seq::index::sample(rng, dataset.n(), k)
        .into_iter()
        .map(|i| dataset.point(i).to_vec())
        .collect())
}
