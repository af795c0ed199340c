//! Max-min distance seeding used as the weak base clusterer of the ensemble.

use rand::Rng;

use crate::data::{sq_dist, Dataset, Partition};
use crate::error::{Result, SceError};

use super::kmeans::{assign, repair_empty};

/// Farthest-point center selection starting from `first`.
///
/// Each new center maximizes the distance to its nearest already-chosen center;
/// ties go to the lowest point index and chosen points are never picked twice.
pub fn mmda_centers(dataset: &Dataset, k: usize, first: usize) -> Result<Vec<usize>> {
    let n = dataset.n();
    if k == 0 {
        return Err(SceError::InvalidConfig("k must be at least 1".into()));
    }
    if k > n {
        return Err(SceError::KExceedsN { k, n });
    }
    if first >= n {
        return Err(SceError::IndexOutOfRange { index: first, n });
    }
    let mut centers = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    let mut nearest: Vec<f64> = vec![f64::INFINITY; n];
    let mut next = first;
    loop {
        centers.push(next);
        taken[next] = true;
        if centers.len() == k {
            return Ok(centers);
        }
        let c = dataset.point(next);
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            let s = sq_dist(dataset.point(i), c);
            if s < nearest[i] {
                nearest[i] = s;
            }
            if !taken[i] && best.is_none_or(|(_, b)| nearest[i] > b) {
                best = Some((i, nearest[i]));
            }
        }
        next = best.expect("k <= n leaves a free point").0;
    }
}

/// One MMDA run with a given first center: choose k centers, assign, move each
/// center to its cluster mean, and assign once more.
pub fn mmda_from(dataset: &Dataset, k: usize, first: usize) -> Result<Partition> {
    let centers = mmda_centers(dataset, k, first)?;
    let points: Vec<&[f64]> = centers.iter().map(|&i| dataset.point(i)).collect();
    let mut labels = assign(dataset, &points);
    repair_empty(dataset, &mut labels, k);
    let centroids = crate::data::centroids_of_labels(dataset, &labels, k);
    let mut labels = assign(dataset, &centroids);
    repair_empty(dataset, &mut labels, k);
    Ok(Partition::from_dense_labels(dataset, labels, k))
}

/// MMDA with a uniformly random first center.
pub fn mmda<R: Rng + ?Sized>(dataset: &Dataset, k: usize, rng: &mut R) -> Result<Partition> {
    if k > dataset.n() {
        return Err(SceError::KExceedsN { k, n: dataset.n() });
    }
    let first = rng.random_range(0..dataset.n());
    mmda_from(dataset, k, first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Dataset {
        Dataset::new(xs.to_vec(), xs.len(), 1).unwrap()
    }

    #[test]
    fn farthest_point_second_center() {
        let ds = line(&[0.0, 1.0, 9.0, 10.0]);
        assert_eq!(mmda_centers(&ds, 2, 0).unwrap(), vec![0, 3]);
        let p = mmda_from(&ds, 2, 0).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn k_one_and_k_n() {
        let ds = line(&[0.0, 1.0, 9.0, 10.0]);
        let p = mmda_from(&ds, 1, 2).unwrap();
        assert_eq!(p.k(), 1);
        assert_eq!(p.labels(), &[0, 0, 0, 0]);
        let p = mmda_from(&ds, 4, 1).unwrap();
        assert_eq!(p.k(), 4);
        assert_eq!(p.sizes(), vec![1, 1, 1, 1]);
        assert_eq!(p.mssc(), 0.0);
        assert!(matches!(
            mmda_from(&ds, 5, 0),
            Err(SceError::KExceedsN { k: 5, n: 4 })
        ));
    }

    #[test]
    fn duplicate_points_still_yield_k_clusters() {
        let ds = line(&[1.0, 1.0, 1.0, 4.0]);
        let p = mmda_from(&ds, 3, 0).unwrap();
        assert_eq!(p.k(), 3);
        assert!(p.sizes().iter().all(|&s| s > 0));
    }

    #[test]
    fn selected_center_maximizes_min_distance() {
        // brute force: recompute D(x) from scratch for each prefix
        let xs: Vec<f64> = (0..40).map(|i| ((i * 37) % 23) as f64 * 0.7 + (i % 5) as f64).collect();
        let ds = line(&xs);
        let centers = mmda_centers(&ds, 8, 5).unwrap();
        for step in 1..centers.len() {
            let prefix = &centers[..step];
            let d = |i: usize| {
                prefix
                    .iter()
                    .map(|&c| (xs[i] - xs[c]).abs())
                    .fold(f64::INFINITY, f64::min)
            };
            let best = (0..xs.len())
                .filter(|i| !prefix.contains(i))
                .map(d)
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(d(centers[step]), best);
        }
    }
}
