//! Generation of the initial candidate pool from repeated MMDA runs with a
//! varying number of clusters.

mod kmeans;
mod mmda;

pub use kmeans::{
    kmeans, kmeans_pp_indices, kmeans_pp_init, kmeans_traced, random_init, KMeansRun,
};
pub(crate) use kmeans::repair_empty;
pub use mmda::{mmda, mmda_centers, mmda_from};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{CandidatePool, Dataset, Partition};
use crate::error::{Result, SceError};

/// Deterministic RNG stream for a seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolConfig {
    /// Target number of clusters.
    pub k: usize,
    /// Number of base partitions.
    pub m_partitions: usize,
    /// Half-width of the range of cluster counts `k - tau ..= k + tau`.
    pub tau: usize,
    pub rng_seed: u64,
}

impl PoolConfig {
    pub const DEFAULT_PARTITIONS: usize = 30;

    /// Defaults: 30 partitions and `tau = floor(k / 10)`.
    pub fn new(k: usize, rng_seed: u64) -> Self {
        Self {
            k,
            m_partitions: Self::DEFAULT_PARTITIONS,
            tau: k / 10,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(SceError::InvalidConfig("k must be at least 2".into()));
        }
        if self.m_partitions == 0 {
            return Err(SceError::InvalidConfig("m_partitions must be at least 1".into()));
        }
        if self.tau + 2 > self.k {
            return Err(SceError::InvalidConfig(format!(
                "k - tau must be at least 2 (k = {}, tau = {})",
                self.k, self.tau
            )));
        }
        Ok(())
    }

    /// Cluster count used by run `r`: cycles through `k - tau ..= k + tau`.
    pub fn clusters_for_run(&self, r: usize) -> usize {
        self.k - self.tau + r % (2 * self.tau + 1)
    }
}

/// Runs MMDA `m_partitions` times and collects every resulting cluster into a
/// fresh, deduplicated pool. Run `r` draws its first center from seed `rng_seed + r`.
pub fn generate_pool(
    dataset: &Dataset,
    cfg: &PoolConfig,
) -> Result<(CandidatePool, Vec<Partition>)> {
    cfg.validate()?;
    let mut pool = CandidatePool::new(dataset);
    let mut partitions = Vec::with_capacity(cfg.m_partitions);
    for r in 0..cfg.m_partitions {
        let mut rng = seeded_rng(cfg.rng_seed.wrapping_add(r as u64));
        let p = mmda(dataset, cfg.clusters_for_run(r), &mut rng)?;
        pool.add_partition(dataset, &p)?;
        partitions.push(p);
    }
    if let Some(point) = pool.first_uncovered() {
        return Err(SceError::InfeasibleCoverage { point });
    }
    Ok((pool, partitions))
}
