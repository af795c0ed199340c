//! K-means refinement followed by best-improvement single-point moves.

use crate::data::{centroids_of_labels, sq_dist, Dataset, Partition};
use crate::initial::kmeans;

/// Smallest relative decrease that counts as an improving move.
pub const MOVE_TOL: f64 = 1e-12;

/// Required decrease for a move at objective value `mssc`.
#[inline]
pub fn move_threshold(mssc: f64) -> f64 {
    MOVE_TOL * mssc.max(1.0)
}

/// Change in MSSC from moving point `x` out of a cluster with centroid `ma` and
/// `na` members into one with centroid `mb` and `nb` members. Requires `na >= 2`.
#[inline]
pub fn move_delta(x: &[f64], ma: &[f64], na: usize, mb: &[f64], nb: usize) -> f64 {
    let nb = nb as f64;
    let na = na as f64;
    nb / (nb + 1.0) * sq_dist(x, mb) - na / (na - 1.0) * sq_dist(x, ma)
}

struct State {
    labels: Vec<usize>,
    sums: Vec<Vec<f64>>,
    sizes: Vec<usize>,
    centroids: Vec<Vec<f64>>,
}

impl State {
    fn new(dataset: &Dataset, labels: Vec<usize>, k: usize) -> Self {
        let d = dataset.d();
        let mut sums = vec![vec![0.0; d]; k];
        let mut sizes = vec![0; k];
        for (i, &l) in labels.iter().enumerate() {
            sizes[l] += 1;
            sums[l].iter_mut().zip(dataset.point(i)).for_each(|(s, v)| *s += v);
        }
        let centroids = centroids_of_labels(dataset, &labels, k);
        Self {
            labels,
            sums,
            sizes,
            centroids,
        }
    }

    fn refresh(&mut self, c: usize) {
        let inv = 1.0 / self.sizes[c] as f64;
        for (m, s) in self.centroids[c].iter_mut().zip(&self.sums[c]) {
            *m = s * inv;
        }
    }

    fn relocate(&mut self, dataset: &Dataset, i: usize, to: usize) {
        let from = self.labels[i];
        let x = dataset.point(i);
        self.sums[from].iter_mut().zip(x).for_each(|(s, v)| *s -= v);
        self.sums[to].iter_mut().zip(x).for_each(|(s, v)| *s += v);
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.labels[i] = to;
        self.refresh(from);
        self.refresh(to);
    }

    /// Most negative move delta, ties to the lowest (point, cluster).
    fn best_move(&self, dataset: &Dataset) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, &a) in self.labels.iter().enumerate() {
            if self.sizes[a] < 2 {
                continue;
            }
            let x = dataset.point(i);
            let away = self.sizes[a] as f64 / (self.sizes[a] - 1) as f64
                * sq_dist(x, &self.centroids[a]);
            for b in 0..self.sizes.len() {
                if b == a {
                    continue;
                }
                let nb = self.sizes[b] as f64;
                let delta = nb / (nb + 1.0) * sq_dist(x, &self.centroids[b]) - away;
                if best.is_none_or(|(_, _, v)| delta < v) {
                    best = Some((i, b, delta));
                }
            }
        }
        best
    }
}

/// Best-improvement single moves until none lowers the MSSC by more than
/// [`move_threshold`]. Clusters are never emptied.
pub fn single_move_descent(dataset: &Dataset, partition: &Partition) -> Partition {
    let k = partition.k();
    let mut labels = partition.labels().to_vec();
    let mut mssc = partition.mssc();
    loop {
        // Fresh sums each round keep drift in the incremental centroids bounded.
        let mut st = State::new(dataset, labels, k);
        let mut moved = 0;
        while moved < dataset.n() {
            match st.best_move(dataset) {
                Some((i, b, delta)) if delta < -move_threshold(mssc) => {
                    st.relocate(dataset, i, b);
                    mssc += delta;
                    moved += 1;
                }
                _ => break,
            }
        }
        labels = st.labels;
        let exact = Partition::from_dense_labels(dataset, labels.clone(), k);
        mssc = exact.mssc();
        if moved == 0 {
            return exact;
        }
    }
}

/// Lloyd iterations seeded with the partition's centroids, then single-move
/// descent. Never returns a worse partition than its input.
pub fn iteration_optimization(
    dataset: &Dataset,
    partition: &Partition,
    kmeans_max_iters: usize,
) -> Partition {
    let seeded = kmeans(dataset, &partition.centroids(dataset), kmeans_max_iters)
        .ok()
        .filter(|p| p.k() == partition.k() && p.mssc() <= partition.mssc());
    let start = seeded.as_ref().unwrap_or(partition);
    let out = single_move_descent(dataset, start);
    if out.mssc() <= partition.mssc() {
        out
    } else {
        partition.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::mssc;

    fn line(xs: &[f64]) -> Dataset {
        Dataset::new(xs.to_vec(), xs.len(), 1).unwrap()
    }

    #[test]
    fn converges_to_split() {
        let ds = line(&[0.0, 1.0, 9.0, 10.0]);
        let p = Partition::from_labels(&ds, &[0, 0, 0, 1]).unwrap();
        let out = iteration_optimization(&ds, &p, 100);
        assert_eq!(out.labels(), &[0, 0, 1, 1]);
        assert!((out.mssc() - 1.0).abs() < 1e-12);
        // descent alone gets there too
        let out = single_move_descent(&ds, &p);
        assert!((out.mssc() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_minimum_unchanged() {
        let ds = line(&[0.0, 1.0, 9.0, 10.0]);
        let p = Partition::from_labels(&ds, &[0, 0, 1, 1]).unwrap();
        assert_eq!(iteration_optimization(&ds, &p, 100), p);
    }

    #[test]
    fn delta_matches_recomputation() {
        let ds = line(&[0.0, 1.0, 2.5, 9.0, 10.0, 4.0]);
        let labels = [0, 0, 1, 1, 1, 0];
        let p = Partition::from_labels(&ds, &labels).unwrap();
        let cs = p.centroids(&ds);
        let sizes = p.sizes();
        for i in 0..6 {
            let a = labels[i];
            let b = 1 - a;
            let delta = move_delta(ds.point(i), &cs[a], sizes[a], &cs[b], sizes[b]);
            let mut moved = labels;
            moved[i] = b;
            let after = mssc(&ds, &Partition::from_labels(&ds, &moved).unwrap());
            assert!((delta - (after - p.mssc())).abs() < 1e-9 * p.mssc());
        }
    }

    #[test]
    fn never_empties_a_cluster() {
        let ds = line(&[0.0, 0.1, 0.2, 50.0]);
        let p = Partition::from_labels(&ds, &[0, 0, 1, 0]).unwrap();
        let out = single_move_descent(&ds, &p);
        assert_eq!(out.k(), 2);
        assert!(out.sizes().iter().all(|&s| s > 0));
        assert!(out.mssc() <= p.mssc());
    }
}
