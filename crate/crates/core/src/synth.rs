//! Seeded isotropic Gaussian mixtures.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::data::Dataset;
use crate::error::{Result, SceError};
use crate::initial::seeded_rng;

/// Shape of a generated mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSpec {
    pub clusters: usize,
    pub points_per_cluster: usize,
    pub dim: usize,
    /// Centers are drawn uniformly from `[-center_box, center_box]^dim`.
    pub center_box: f64,
    pub stddev: f64,
}

impl MixtureSpec {
    /// 60 clusters of 20 points in the plane, scaled so the MSSC at k = 60 is
    /// near 3.9e3 and at k = 10 near 5e4.
    pub const GAUSS60: Self = Self {
        clusters: 60,
        points_per_cluster: 20,
        dim: 2,
        center_box: 30.0,
        stddev: 1.3,
    };
}

/// Points are grouped by cluster: rows `c * per .. (c + 1) * per` belong to
/// cluster `c`. Returns the dataset and the generating labels.
pub fn generate_gaussian_mixture(spec: &MixtureSpec, seed: u64) -> Result<(Dataset, Vec<usize>)> {
    let MixtureSpec {
        clusters,
        points_per_cluster: per,
        dim,
        center_box,
        stddev,
    } = *spec;
    if clusters == 0 || per == 0 || dim == 0 {
        return Err(SceError::InvalidConfig("mixture counts must be at least 1".into()));
    }
    if !(center_box >= 0.0 && center_box.is_finite()) || !(stddev >= 0.0 && stddev.is_finite()) {
        return Err(SceError::InvalidConfig(
            "center box and stddev must be finite and nonnegative".into(),
        ));
    }
    let mut rng = seeded_rng(seed);
    let noise = Normal::new(0.0, stddev).map_err(|e| SceError::InvalidConfig(e.to_string()))?;
    let centers: Vec<f64> = (0..clusters * dim)
        .map(|_| {
            if center_box > 0.0 {
                rng.random_range(-center_box..=center_box)
            } else {
                0.0
            }
        })
        .collect();
    let mut values = Vec::with_capacity(clusters * per * dim);
    let mut labels = Vec::with_capacity(clusters * per);
    for c in 0..clusters {
        for _ in 0..per {
            for j in 0..dim {
                values.push(centers[c * dim + j] + noise.sample(&mut rng));
            }
            labels.push(c);
        }
    }
    Ok((Dataset::new(values, clusters * per, dim)?, labels))
}
