//! Rounding a relaxed selection vector to a hard k-partition.

use crate::data::{sq_dist, CandidatePool, Dataset, Partition};
use crate::error::{Result, SceError};
use crate::initial::repair_empty;

/// Outcome of rounding: the partition, the chosen candidate ids in selection
/// order, and whether the dispersion filter had to be relaxed to reach k.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjusted {
    pub partition: Partition,
    pub selected: Vec<usize>,
    pub filter_relaxed: bool,
}

/// Scans candidates by decreasing `x` (ties: lower cost, then lower index) and
/// keeps the first `k` whose `d_i` exceeds `eta / k`, topping up from the scan
/// order if too few pass. Each point then joins the nearest selected centroid
/// among the selected clusters containing it, or among all of them if none does.
pub fn adjust_solution(
    x: &[f64],
    pool: &CandidatePool,
    d: &[f64],
    eta: f64,
    dataset: &Dataset,
    k: usize,
) -> Result<Adjusted> {
    let q = pool.q();
    if x.len() != q || d.len() != q {
        return Err(SceError::DimensionMismatch {
            expected: q,
            got: x.len().min(d.len()),
        });
    }
    if k == 0 || q < k {
        return Err(SceError::NotEnoughCandidates { k });
    }
    if k > dataset.n() {
        return Err(SceError::KExceedsN { k, n: dataset.n() });
    }
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &b| {
        x[b].total_cmp(&x[a])
            .then(pool.get(a).cost().total_cmp(&pool.get(b).cost()))
            .then(a.cmp(&b))
    });
    let bar = eta / k as f64;
    let mut selected: Vec<usize> = order.iter().copied().filter(|&j| d[j] > bar).take(k).collect();
    let filter_relaxed = selected.len() < k;
    if filter_relaxed {
        for &j in &order {
            if selected.len() == k {
                break;
            }
            if !selected.contains(&j) {
                selected.push(j);
            }
        }
    }

    let centroids: Vec<&[f64]> = selected.iter().map(|&j| pool.get(j).centroid()).collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); dataset.n()];
    for (slot, &j) in selected.iter().enumerate() {
        for &p in pool.get(j).members() {
            containing[p].push(slot);
        }
    }
    let labels: Vec<usize> = (0..dataset.n())
        .map(|p| {
            let x = dataset.point(p);
            let nearest_of = |slots: &mut dyn Iterator<Item = usize>| {
                slots
                    .map(|s| (s, sq_dist(x, centroids[s])))
                    .fold(None, |best: Option<(usize, f64)>, (s, v)| match best {
                        Some((_, b)) if b <= v => best,
                        _ => Some((s, v)),
                    })
                    .expect("at least one slot")
                    .0
            };
            match containing[p].len() {
                1 => containing[p][0],
                0 => nearest_of(&mut (0..k)),
                _ => nearest_of(&mut containing[p].iter().copied()),
            }
        })
        .collect();
    let mut labels = labels;
    repair_empty(dataset, &mut labels, k);
    let partition = Partition::from_dense_labels(dataset, labels, k);
    debug_assert_eq!(partition.sizes().iter().filter(|&&s| s > 0).count(), k);
    Ok(Adjusted {
        partition,
        selected,
        filter_relaxed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::CandidateCluster;

    fn setup(xs: &[f64], clusters: &[&[usize]]) -> (Dataset, CandidatePool) {
        let ds = Dataset::new(xs.to_vec(), xs.len(), 1).unwrap();
        let mut pool = CandidatePool::new(&ds);
        for c in clusters {
            pool.add(CandidateCluster::from_members(&ds, c).unwrap()).unwrap();
        }
        (ds, pool)
    }

    #[test]
    fn takes_top_two() {
        let (ds, pool) = setup(&[0.0, 1.0, 9.0, 10.0], &[&[0, 1], &[2, 3], &[0, 1, 2, 3]]);
        let a = adjust_solution(&[0.9, 0.8, 0.1], &pool, &[5.0; 3], 4.0, &ds, 2).unwrap();
        assert_eq!(a.selected, vec![0, 1]);
        assert!(!a.filter_relaxed);
        assert_eq!(a.partition.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn filter_skips_close_candidates() {
        let (ds, pool) = setup(&[0.0, 1.0, 9.0, 10.0], &[&[0, 1], &[2, 3], &[0, 1, 2, 3]]);
        let a = adjust_solution(&[0.9, 0.1, 0.8], &pool, &[5.0, 5.0, 1.0], 4.0, &ds, 2).unwrap();
        assert_eq!(a.selected, vec![0, 1]);
        let a = adjust_solution(&[0.9, 0.1, 0.8], &pool, &[5.0, 1.0, 1.0], 4.0, &ds, 2).unwrap();
        assert!(a.filter_relaxed);
        assert_eq!(a.selected, vec![0, 2]);
    }

    #[test]
    fn overlap_goes_to_nearer_centroid() {
        // point 2 (x = 5) lies in both; centroids 2.0 and 7.0
        let (ds, pool) = setup(&[0.0, 1.0, 5.0, 9.0, 7.0], &[&[0, 1, 2], &[2, 3, 4]]);
        let a = adjust_solution(&[1.0, 0.9], &pool, &[1.0; 2], 0.0, &ds, 2).unwrap();
        assert_eq!(a.partition.labels(), &[0, 0, 1, 1, 1]);
    }

    #[test]
    fn uncovered_points_and_cost_ties() {
        let (ds, pool) = setup(
            &[0.0, 1.0, 9.0, 10.0],
            &[&[0, 1], &[3], &[2, 3]],
        );
        // equal x: candidate 1 (cost 0) wins over candidate 2 (cost 0.5)
        let a = adjust_solution(&[1.0, 0.5, 0.5], &pool, &[1.0; 3], 0.0, &ds, 2).unwrap();
        assert_eq!(a.selected, vec![0, 1]);
        assert_eq!(a.partition.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn swallowed_cluster_is_repaired() {
        // identical centroids (1.5): every shared point goes to slot 0, leaving slot 1 empty
        let (ds, pool) = setup(&[0.0, 1.0, 2.0, 3.0], &[&[0, 1, 2, 3], &[0, 3]]);
        let a = adjust_solution(&[1.0, 1.0], &pool, &[1.0; 2], 0.0, &ds, 2).unwrap();
        assert_eq!(a.partition.k(), 2);
        assert!(a.partition.sizes().iter().all(|&s| s > 0));
    }

    #[test]
    fn too_few_candidates() {
        let (ds, pool) = setup(&[0.0, 1.0], &[&[0, 1]]);
        assert!(matches!(
            adjust_solution(&[1.0], &pool, &[1.0], 0.0, &ds, 2),
            Err(SceError::NotEnoughCandidates { k: 2 })
        ));
    }
}
