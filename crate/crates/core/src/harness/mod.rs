//! Experiment runner: generates or loads streams, drives the pipelines, runs
//! the exact oracles in a separate pass and reports ratios and space.

mod experiment;
mod instances;

use thiserror::Error;

use crate::cnf::CnfError;
use crate::maxsat::MaxSatError;
use crate::minsat::MinSatError;

pub use crate::space::SpaceReport;
pub use experiment::{
    run_experiment, Aggregate, Experiment, ExperimentConfig, MinAlgo, OfflineChoice, ReportLine, ResultReport, RunRecord,
    Source, Task,
};
pub use instances::{bounded_frequency_instance, dynamic_instance, random_clauses, random_instance};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("oracle needs {vars} variables, limit is {limit}")]
    OracleGuardViolated { vars: usize, limit: usize },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    MaxSat(#[from] MaxSatError),
    #[error(transparent)]
    MinSat(#[from] MinSatError),
}
