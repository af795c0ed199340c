//! Nested perturbations of clusters: grow by nearest non-members, shrink by
//! dropping the farthest members.

use crate::data::{sq_dist, Dataset, Partition};

/// For every cluster of every partition, the member lists of `S_i^+` and
/// `S_i^-` for `i = 1..=omega`. Growth stops once every point is included;
/// shrinking stops before a cluster would become empty. Output may contain
/// duplicates.
pub fn expand_clusters(partitions: &[&Partition], dataset: &Dataset, omega: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for p in partitions {
        let centroids = p.centroids(dataset);
        for (c, members) in p.clusters().into_iter().enumerate() {
            expand_one(dataset, &members, &centroids[c], omega, &mut out);
        }
    }
    out
}

fn expand_one(
    dataset: &Dataset,
    members: &[usize],
    centroid: &[f64],
    omega: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let dist = |i: usize| sq_dist(dataset.point(i), centroid);
    let mut inside = vec![false; dataset.n()];
    members.iter().for_each(|&i| inside[i] = true);

    let mut outside: Vec<(f64, usize)> = (0..dataset.n())
        .filter(|&i| !inside[i])
        .map(|i| (dist(i), i))
        .collect();
    let take = omega.min(outside.len());
    if take > 0 && take < outside.len() {
        outside.select_nth_unstable_by(take - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    }
    outside.truncate(take);
    outside.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut grown = members.to_vec();
    for &(_, i) in &outside {
        grown.push(i);
        let mut s = grown.clone();
        s.sort_unstable();
        out.push(s);
    }

    // farthest first; among equals the higher index goes first
    let mut inner: Vec<(f64, usize)> = members.iter().map(|&i| (dist(i), i)).collect();
    inner.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)));
    let mut removed = vec![false; dataset.n()];
    for &(_, i) in inner.iter().take(omega.min(members.len().saturating_sub(1))) {
        removed[i] = true;
        out.push(members.iter().copied().filter(|&m| !removed[m]).collect());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Dataset {
        Dataset::new(xs.to_vec(), xs.len(), 1).unwrap()
    }

    #[test]
    fn pair_with_one_step() {
        let ds = line(&[0.0, 1.0, 9.0, 10.0]);
        let p = Partition::from_labels(&ds, &[0, 0, 1, 1]).unwrap();
        let out = expand_clusters(&[&p], &ds, 1);
        assert_eq!(
            out,
            vec![vec![0, 1, 2], vec![0], vec![1, 2, 3], vec![2]]
        );
    }

    #[test]
    fn singleton_only_grows() {
        let ds = line(&[0.0, 1.0, 2.0, 3.0]);
        let p = Partition::from_labels(&ds, &[0, 1, 1, 1]).unwrap();
        let out = expand_clusters(&[&p], &ds, 10);
        // cluster 0 = {0}: three growth sets, then cluster 1 = {1,2,3}: one growth, two shrinks
        assert_eq!(out[..3], [vec![0, 1], vec![0, 1, 2], vec![0, 1, 2, 3]]);
        assert_eq!(out[3..], [vec![0, 1, 2, 3], vec![1, 2], vec![2]]);
    }

    #[test]
    fn nested_chains() {
        let ds = line(&[0.0, 0.5, 3.0, 3.2, 7.0, 8.0, 8.5, 20.0]);
        let p = Partition::from_labels(&ds, &[0, 0, 0, 1, 1, 1, 1, 1]).unwrap();
        let out = expand_clusters(&[&p], &ds, 3);
        // cluster 0: 3 grown + 2 shrunk, cluster 1: 3 grown + 3 shrunk
        assert_eq!(out.len(), 11);
        let subset = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|i| b.contains(i));
        for chain in [&out[0..3], &out[5..8]] {
            assert!(chain.windows(2).all(|w| subset(&w[0], &w[1]) && w[1].len() == w[0].len() + 1));
        }
        for chain in [&out[3..5], &out[8..11]] {
            assert!(chain.windows(2).all(|w| subset(&w[1], &w[0]) && w[0].len() == w[1].len() + 1));
        }
        assert_eq!(out[8], vec![3, 4, 5, 6]);
    }
}
