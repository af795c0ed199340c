use std::path::PathBuf;

use crate::qp::RelaxedSolution;

pub type Result<T, E = SceError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum SceError {
    #[error("dataset must contain at least one point of dimension at least one")]
    EmptyDataset,
    #[error("coordinate ({row}, {col}) is not finite")]
    NonFiniteCoordinate { row: usize, col: usize },
    #[error("cluster has no members")]
    EmptyCluster,
    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelLengthMismatch { expected: usize, got: usize },
    #[error("cluster does not belong to a dataset of {n} points in {d} dimensions")]
    DatasetMismatch { n: usize, d: usize },
    #[error("requested {k} clusters but the dataset has only {n} points")]
    KExceedsN { k: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("the pool needs at least two candidates")]
    SingleCandidate,
    #[error("heat-kernel bandwidth must be positive, got {0}")]
    NonpositiveSigma(f64),
    #[error("all candidate centroids coincide")]
    DegeneratePool,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("partition has a single cluster, no inter-cluster distance exists")]
    SingleClusterPartition,

    #[error("point {point} is not covered by any candidate")]
    InfeasibleCoverage { point: usize },
    #[error("pool has {q} candidates, fewer than k = {k}")]
    TooFewCandidates { q: usize, k: usize },
    #[error("relaxed problem is infeasible: no fractional cover of size k exists")]
    Infeasible,
    #[error("discriminative bound eta = {eta} is unattainable")]
    EtaInfeasible { eta: f64 },
    #[error("interior-point solver hit its iteration limit")]
    MaxItersExceeded { best: Box<RelaxedSolution> },
    #[error("fewer than k = {k} candidates available for rounding")]
    NotEnoughCandidates { k: usize },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("reference value must be positive, got {0}")]
    NonpositiveReference(f64),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },
    #[error("row {row} has {got} fields, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
}
