//! Streaming Min-SAT: subsampling over geometric guesses of the optimum, the
//! settled-variable algorithm, the bounded-frequency rule and a sketch-based
//! brute-force estimator.

mod f0_brute;
mod freq;
mod kohli;
mod settled;
mod subsampled;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Clause, CnfError, Op, ParameterError, Parameters, StreamEvent};
use crate::maxsat::TooManyVariables;
use crate::samplers::SamplerError;

pub use f0_brute::{minsat_f0_bruteforce, F0Outcome, LiteralSketchBank, F0_VAR_LIMIT};
pub use freq::{detect_opt_zero, minsat_bounded_freq, BoundedFreqOutcome, OptZeroDetector};
pub use kohli::{kohli_greedy, kohli_repeated, kohli_repetitions};
pub use settled::{settled_minsat, SettledOutcome, SettledState};
pub use subsampled::{minsat_subsampled, InstanceReport, SubsampledOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MinSatError {
    #[error(transparent)]
    TooManyVariables(#[from] TooManyVariables),
    #[error("every guess instance exceeded its budget of {budget} words")]
    AllInstancesTerminated { budget: u64 },
    #[error("variable {var} occurs in more than {f} clauses")]
    FrequencyBoundViolated { var: u32, f: usize },
    #[error(transparent)]
    Stream(#[from] CnfError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Parameters(#[from] ParameterError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Offline solver applied to whatever the streaming phase kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Offline {
    Exact,
    /// Randomized greedy, best of `reps` runs.
    Kohli { reps: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinSatConfig {
    pub params: Parameters,
    /// Settling threshold used by every guess instance.
    pub u: u64,
    /// Per-instance budget is `budget_factor · n · u` words.
    pub budget_factor: f64,
    pub offline: Offline,
}

impl MinSatConfig {
    /// `u = ceil(2K n / eps²)`: twice the expected sampled optimum under the
    /// right guess.
    pub fn new(params: Parameters, offline: Offline) -> Result<Self, MinSatError> {
        params.validate()?;
        let u = (2.0 * params.k * params.n as f64 / (params.eps * params.eps)).ceil() as u64;
        Ok(MinSatConfig { params, u: u.max(1), budget_factor: 4.0, offline })
    }

    /// `z = 1, 2, 4, …` up to `2m`.
    pub fn guesses(&self) -> Vec<u64> {
        let top = 2 * self.params.m as u64;
        std::iter::successors(Some(1u64), |z| Some(z * 2)).take_while(|&z| z <= top).collect()
    }

    /// `min(1, K n / (eps² z))`.
    pub fn p_for(&self, z: u64) -> f64 {
        let p = self.params.k * self.params.n as f64 / (self.params.eps * self.params.eps * z as f64);
        p.min(1.0)
    }

    pub fn instance_budget(&self) -> u64 {
        (self.budget_factor * self.params.n as f64 * self.u as f64).ceil() as u64
    }

    pub fn validate(&self) -> Result<(), MinSatError> {
        self.params.validate()?;
        if self.u == 0 {
            return Err(MinSatError::Config("u must be positive".into()));
        }
        if !(self.budget_factor > 0.0) {
            return Err(MinSatError::Config(format!("budget factor {} must be positive", self.budget_factor)));
        }
        if let Offline::Kohli { reps: 0 } = self.offline {
            return Err(MinSatError::Config("kohli needs at least one repetition".into()));
        }
        Ok(())
    }
}

/// Min-SAT streams are insertion-only.
pub(crate) fn inserted(ev: &StreamEvent) -> Result<&Clause, MinSatError> {
    match ev.op {
        Op::Insert => Ok(&ev.clause),
        Op::Delete => Err(CnfError::DeleteInStaticStream.into()),
    }
}
