//! Spectral-regularized set-covering ensemble clustering for the minimum
//! sum-of-squares clustering problem.

pub mod baseline;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod graph;
pub mod initial;
pub mod io;
pub mod qp;
pub mod synth;

pub use data::{mssc, CandidateCluster, CandidatePool, CostKind, Dataset, Partition};
pub use error::{Result, SceError};
pub use graph::{
    default_sigma, discriminative_distances, estimate_eta, laplacian_quadratic, ClusterGraph,
};
pub use initial::{generate_pool, mmda, PoolConfig};
pub use qp::{
    build_problem, read_instance, solve_relaxed, solve_relaxed_with, write_instance, Laplacian,
    RelaxedSolution, SceProblem, SolverOptions,
};
pub use ensemble::{run_sce, EnsembleConfig, EnsembleTrace, IterationRecord};
pub use io::{load_csv, read_csv, save_csv, write_csv, LoadedData};
pub use synth::{generate_gaussian_mixture, MixtureSpec};
pub use eval::{
    clustering_accuracy, co_association, eac_single_link, relative_error, CoAssociationMatrix,
};
pub use baseline::{kmeans_best_of, BestOf, Seeding};
