//! Command-line front end: argument parsing, run orchestration and output files.

pub mod args;
pub mod config;
pub mod error;
pub mod plot;
pub mod report;
pub mod run;

pub use args::{Baseline, Cli, Command, CommonArgs, GenSpec};
pub use config::{DataSource, EffectiveConfig, RunConfig};
pub use error::{CliError, Result};
pub use run::{cmd_run, cmd_sweep, MethodRecord, RunOutcome};
