//! Streaming Max-SAT: drop large clauses, sample the small ones, solve the
//! sample offline and amplify by best-of-Q randomized trials.

mod exact;
mod lp;
mod pipeline;
mod rounding;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Clause, CnfError, ParameterError, Parameters, StreamMode};
use crate::samplers::SamplerError;

pub use exact::{exact_maxsat, exact_optimum, Objective, TooManyVariables, EXACT_VAR_LIMIT};
pub use lp::{build_lp, solve_lp, LpModel, LpRow, LpSolution, DEFAULT_TOL, ITERATION_CAP};
pub use pipeline::{
    one_literal_branch, stream_maxsat, Branch, MaxSatOutcome, MaxSatStream, OneLiteralStream, SampleSet,
    SampleSource,
};
pub use rounding::{
    best_of_trials, best_of_trials_by, lp_round, lp_round_probabilities, perturb, postprocess_exact_perturb,
    postprocess_lp_round,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxSatError {
    #[error(transparent)]
    TooManyVariables(#[from] TooManyVariables),
    #[error("LP solver failed: {0}")]
    NumericalFailure(String),
    #[error("stored {used} words, budget is {budget}")]
    SpaceBudgetExceeded { used: u64, budget: u64 },
    #[error(transparent)]
    Stream(#[from] CnfError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Parameters(#[from] ParameterError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostProcess {
    /// Exact optimum on the sample, then best of Q ε-perturbations.
    ExactPerturb,
    /// LP relaxation, then best of Q roundings at `1/4 + y*/2`.
    LpRound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxSatConfig {
    pub params: Parameters,
    pub mode: PostProcess,
    pub stream_kind: StreamMode,
    /// Lower bound on the probability that a randomized trial sets any given
    /// literal true: ε for perturbation, 1/4 for LP rounding.
    pub gamma: f64,
    /// Clauses with at least `beta` literals are dropped.
    pub beta: usize,
    /// Number of randomized trials.
    pub q: usize,
    /// Target sample size.
    pub sample_size: usize,
    pub budget_words: Option<u64>,
    /// Per-sampler failure probability in dynamic mode.
    pub l0_delta: f64,
    /// Check insert/delete consistency (outside the space budget).
    pub validate: bool,
    pub lp_tol: f64,
}

impl MaxSatConfig {
    /// `beta = ceil(K ln m / gamma)`, `q = ceil(K ln m / eps)`,
    /// `s = ceil(K n / eps²)`.
    pub fn new(params: Parameters, mode: PostProcess, stream_kind: StreamMode) -> Result<Self, MaxSatError> {
        params.validate()?;
        let gamma = match mode {
            PostProcess::ExactPerturb => params.eps,
            PostProcess::LpRound => 0.25,
        };
        let k_log_m = params.k * params.log_m();
        Ok(MaxSatConfig {
            params,
            mode,
            stream_kind,
            gamma,
            beta: ((k_log_m / gamma).ceil() as usize).max(1),
            q: ((k_log_m / params.eps).ceil() as usize).max(1),
            sample_size: ((params.k * params.n as f64 / (params.eps * params.eps)).ceil() as usize).max(1),
            budget_words: None,
            l0_delta: 1e-3,
            validate: true,
            lp_tol: DEFAULT_TOL,
        })
    }

    pub fn validate(&self) -> Result<(), MaxSatError> {
        self.params.validate()?;
        if !(self.gamma > 0.0 && self.gamma <= 0.5) {
            return Err(MaxSatError::Config(format!("gamma = {} outside (0, 1/2]", self.gamma)));
        }
        if self.beta == 0 || self.q == 0 || self.sample_size == 0 {
            return Err(MaxSatError::Config("beta, q and the sample size must be positive".into()));
        }
        if !(self.l0_delta > 0.0 && self.l0_delta < 1.0) {
            return Err(MaxSatError::Config(format!("l0 delta = {} outside (0, 1)", self.l0_delta)));
        }
        Ok(())
    }
}

/// Number of clauses satisfied by `a`, under each clause's own kind.
pub fn evaluate(a: &Assignment, clauses: &[Clause]) -> usize {
    clauses.iter().filter(|c| c.is_satisfied_by(a)).count()
}

pub fn is_large(c: &Clause, beta: usize) -> bool {
    c.len() >= beta
}
