//! Best-of-R restart baselines for plain k-means.

use crate::data::{Dataset, Partition};
use crate::error::{Result, SceError};
use crate::initial::{kmeans_traced, kmeans_pp_init, random_init, seeded_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seeding {
    /// k distinct data points chosen uniformly.
    Forgy,
    KMeansPlusPlus,
}

#[derive(Debug, Clone)]
pub struct BestOf {
    pub partition: Partition,
    /// Restart that produced the best partition.
    pub best_restart: usize,
    /// Lloyd iterations summed over all restarts.
    pub iterations: usize,
}

/// Runs `restarts` independent k-means runs, restart `r` seeded with `seed + r`,
/// and keeps the lowest MSSC (earliest restart on ties).
pub fn kmeans_best_of(
    dataset: &Dataset,
    k: usize,
    restarts: usize,
    seeding: Seeding,
    max_iters: usize,
    seed: u64,
) -> Result<BestOf> {
    if restarts == 0 {
        return Err(SceError::InvalidConfig("restarts must be at least 1".into()));
    }
    let mut best: Option<BestOf> = None;
    let mut iterations = 0;
    for r in 0..restarts {
        let mut rng = seeded_rng(seed.wrapping_add(r as u64));
        let centers = match seeding {
            Seeding::Forgy => random_init(dataset, k, &mut rng)?,
            Seeding::KMeansPlusPlus => kmeans_pp_init(dataset, k, &mut rng)?,
        };
        let run = kmeans_traced(dataset, &centers, max_iters)?;
        iterations += run.iterations;
        if best
            .as_ref()
            .is_none_or(|b| run.partition.mssc() < b.partition.mssc())
        {
            best = Some(BestOf {
                partition: run.partition,
                best_restart: r,
                iterations: 0,
            });
        }
    }
    let mut best = best.expect("restarts >= 1");
    best.iterations = iterations;
    Ok(best)
}
