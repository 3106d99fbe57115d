use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::{Clause, Parameters, StreamFile, StreamMode};
use crate::maxsat::{evaluate, exact_optimum, stream_maxsat, MaxSatConfig, Objective, PostProcess, EXACT_VAR_LIMIT};
use crate::minsat::{
    kohli_repetitions, minsat_bounded_freq, minsat_f0_bruteforce, minsat_subsampled, MinSatConfig, Offline,
};
use crate::samplers::derive_seed;
use crate::space::SpaceReport;

use super::{bounded_frequency_instance, dynamic_instance, random_clauses, HarnessError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub master_seed: u64,
    /// Record wall-clock time per run. Off by default so reports are
    /// byte-for-byte reproducible.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub name: String,
    pub task: Task,
    pub source: Source,
    /// Instances drawn from `source` (files always give one).
    #[serde(default = "one")]
    pub instances: usize,
    /// Seeded runs per instance.
    #[serde(default = "one")]
    pub seeds: usize,
    pub eps: f64,
    #[serde(rename = "K", default = "default_k")]
    pub k: f64,
    #[serde(default)]
    pub oracle: bool,
    /// A run succeeds when its ratio is at least this (Max-SAT) or at most
    /// this (Min-SAT).
    #[serde(default)]
    pub ratio_threshold: Option<f64>,
    /// Fraction of successful runs needed for the experiment to pass.
    #[serde(default)]
    pub required_success: Option<f64>,
}

fn one() -> usize {
    1
}

fn default_k() -> f64 {
    4.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum Task {
    Maxsat { mode: PostProcess },
    Minsat {
        algo: MinAlgo,
        #[serde(default)]
        offline: OfflineChoice,
        #[serde(default)]
        f: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinAlgo {
    Settled,
    Freq,
    F0,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OfflineChoice {
    #[default]
    Exact,
    Kohli,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Random {
        n: usize,
        m: usize,
        min_len: usize,
        max_len: usize,
        /// Wrap the clauses in a dynamic stream with this share of deletions.
        #[serde(default)]
        deletion_fraction: f64,
    },
    BoundedFrequency { n: usize, f: usize, max_len: usize },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub instance: usize,
    pub seed: u64,
    /// Exact value of the returned assignment on the final clause set.
    pub value: usize,
    /// The algorithm's own estimate, where it has one.
    pub estimate: Option<f64>,
    pub opt: Option<usize>,
    pub ratio: Option<f64>,
    pub success: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
    pub space: SpaceReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub experiment: String,
    pub runs: usize,
    pub success_fraction: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub required_success: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportLine {
    Config(ExperimentConfig),
    Run(RunRecord),
    Aggregate(Aggregate),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultReport {
    pub config: ExperimentConfig,
    pub runs: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
}

impl ResultReport {
    pub fn all_passed(&self) -> bool {
        self.aggregates.iter().all(|a| a.passed)
    }

    /// One JSON object per line: the config echo, every run, then every
    /// aggregate.
    pub fn to_json_lines(&self) -> String {
        let lines = std::iter::once(ReportLine::Config(self.config.clone()))
            .chain(self.runs.iter().cloned().map(ReportLine::Run))
            .chain(self.aggregates.iter().cloned().map(ReportLine::Aggregate));
        lines.map(|l| serde_json::to_string(&l).expect("report serializes") + "\n").collect()
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultReport, HarnessError> {
    let mut runs = Vec::new();
    let mut aggregates = Vec::new();
    for (idx, exp) in cfg.experiments.iter().enumerate() {
        let exp_seed = derive_seed(cfg.master_seed, idx as u64);
        let first = runs.len();
        let instances = if matches!(exp.source, Source::File { .. }) { 1 } else { exp.instances };
        for inst in 0..instances {
            let inst_seed = derive_seed(exp_seed, inst as u64);
            let stream = build_stream(&exp.source, inst_seed)?;
            let final_clauses = stream.final_clauses();
            let opt = if exp.oracle { Some(oracle_value(&exp.task, &final_clauses, stream.header.n)?) } else { None };
            for s in 0..exp.seeds {
                let seed = derive_seed(inst_seed, (1 << 32) + s as u64);
                let started = Instant::now();
                let (assignment, estimate, space) = run_once(exp, &stream, seed)?;
                let runtime_ms = cfg.timing.then(|| started.elapsed().as_millis() as u64);
                let value = evaluate(&assignment, &final_clauses);
                let (ratio, success) = score(&exp.task, value, opt, exp.ratio_threshold);
                runs.push(RunRecord {
                    experiment: exp.name.clone(),
                    instance: inst,
                    seed,
                    value,
                    estimate,
                    opt,
                    ratio,
                    success,
                    runtime_ms,
                    space,
                });
            }
        }
        aggregates.push(aggregate(exp, &runs[first..]));
    }
    Ok(ResultReport { config: cfg.clone(), runs, aggregates })
}

fn build_stream(source: &Source, seed: u64) -> Result<StreamFile, HarnessError> {
    match source {
        Source::Random { n, m, min_len, max_len, deletion_fraction } => {
            let clauses = random_clauses(*n, *m, *min_len..=*max_len, seed)?;
            if *deletion_fraction > 0.0 {
                dynamic_instance(*n, &clauses, *deletion_fraction, *min_len..=*max_len, derive_seed(seed, 1))
            } else {
                Ok(StreamFile::from_clauses(*n, &clauses))
            }
        }
        Source::BoundedFrequency { n, f, max_len } => bounded_frequency_instance(*n, *f, *max_len, seed),
        Source::File { path } => {
            let file = std::fs::File::open(path)
                .map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
            Ok(StreamFile::read(std::io::BufReader::new(file))?)
        }
    }
}

/// Exact optimum on the final clause set, computed without touching any
/// pipeline state.
pub(crate) fn oracle_value(task: &Task, clauses: &[Clause], n: usize) -> Result<usize, HarnessError> {
    let objective = match task {
        Task::Maxsat { .. } => Objective::Maximize,
        Task::Minsat { .. } => Objective::Minimize,
    };
    exact_optimum(clauses, n, objective)
        .map(|(_, v)| v)
        .map_err(|e| HarnessError::OracleGuardViolated { vars: e.vars, limit: EXACT_VAR_LIMIT })
}

fn run_once(
    exp: &Experiment,
    stream: &StreamFile,
    seed: u64,
) -> Result<(crate::cnf::Assignment, Option<f64>, SpaceReport), HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = stream.header.n;
    let params = Parameters::new(n, stream.header.m, exp.eps, exp.k).map_err(|e| HarnessError::Config(e.to_string()))?;
    match &exp.task {
        Task::Maxsat { mode } => {
            let cfg = MaxSatConfig::new(params, *mode, stream.header.mode)?;
            let out = stream_maxsat(&stream.events, &cfg, &mut rng)?;
            Ok((out.assignment, Some(out.estimate), out.space))
        }
        Task::Minsat { algo, offline, f } => {
            if stream.header.mode == StreamMode::Dynamic {
                return Err(HarnessError::Config("Min-SAT needs an insertion-only stream".into()));
            }
            match algo {
                MinAlgo::Settled => {
                    let offline = match offline {
                        OfflineChoice::Exact => Offline::Exact,
                        OfflineChoice::Kohli => Offline::Kohli { reps: kohli_repetitions(n, exp.eps) },
                    };
                    let cfg = MinSatConfig::new(params, offline)?;
                    let out = minsat_subsampled(&stream.events, &cfg, &mut rng)?;
                    Ok((out.assignment, Some(out.value_estimate), out.space))
                }
                MinAlgo::Freq => {
                    let f = f.ok_or_else(|| HarnessError::Config("freq needs `f`".into()))?;
                    let out = minsat_bounded_freq(&stream.events, n, f)?;
                    Ok((out.assignment, Some(out.value_bound as f64), words_only(out.words)))
                }
                MinAlgo::F0 => {
                    let out = minsat_f0_bruteforce(&stream.events, n, exp.eps, None, rand::Rng::gen(&mut rng))?;
                    Ok((out.assignment, Some(out.estimate), words_only(out.words)))
                }
            }
        }
    }
}

fn words_only(words: u64) -> SpaceReport {
    SpaceReport { words_stored_peak: words, ..SpaceReport::default() }
}

/// `value / opt` for Max-SAT, `value / max(opt, 1)` for Min-SAT.
fn score(task: &Task, value: usize, opt: Option<usize>, threshold: Option<f64>) -> (Option<f64>, Option<bool>) {
    let Some(opt) = opt else { return (None, None) };
    let (ratio, maximize) = match task {
        Task::Maxsat { .. } => (if opt == 0 { 1.0 } else { value as f64 / opt as f64 }, true),
        Task::Minsat { .. } => (value as f64 / opt.max(1) as f64, false),
    };
    let success = threshold.map(|t| if maximize { ratio >= t } else { ratio <= t });
    (Some(ratio), success)
}

fn aggregate(exp: &Experiment, runs: &[RunRecord]) -> Aggregate {
    let ratios: Vec<f64> = runs.iter().filter_map(|r| r.ratio).collect();
    let successes: Vec<bool> = runs.iter().filter_map(|r| r.success).collect();
    let mean = |xs: &[f64]| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    let success_fraction =
        (!successes.is_empty()).then(|| successes.iter().filter(|&&s| s).count() as f64 / successes.len() as f64);
    let passed = match exp.required_success {
        Some(req) => success_fraction.is_some_and(|f| f >= req),
        None => true,
    };
    Aggregate {
        experiment: exp.name.clone(),
        runs: runs.len(),
        success_fraction,
        mean_ratio: mean(&ratios),
        required_success: exp.required_success,
        passed,
    }
}
