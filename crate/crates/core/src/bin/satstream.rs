use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use satstream::cnf::{Assignment, Parameters, StreamFile, StreamMode};
use satstream::hardness::{
    default_t, exact_maxand, gen_ksat_index, gen_maxand_index, gen_minsat_index, gen_sk, pairwise_exclusive,
    HardnessConfig, IndexInstance,
};
use satstream::harness::{bounded_frequency_instance, dynamic_instance, random_clauses, run_experiment, ExperimentConfig};
use satstream::maxsat::{exact_optimum, one_literal_branch, stream_maxsat, MaxSatConfig, Objective, PostProcess};
use satstream::minsat::{
    kohli_repetitions, minsat_bounded_freq, minsat_f0_bruteforce, minsat_subsampled, MinSatConfig, Offline,
};

type AnyError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(name = "satstream", about = "Single-pass streaming Max-SAT / Min-SAT toolkit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Approximate Max-SAT over a stream file.
    Maxsat {
        #[arg(long, value_enum, default_value = "exact-perturb")]
        mode: Mode,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long = "K", default_value_t = 4.0)]
        k: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the unit-clause branch instead of the sampling pipeline.
        #[arg(long)]
        one_literal: bool,
        /// Fail if the pipeline stores more than this many words.
        #[arg(long, alias = "budget-words")]
        budget: Option<u64>,
        /// Treat the stream as turnstile even if its header says static.
        #[arg(long)]
        dynamic: bool,
        /// Also compute the exact optimum (separate pass) and the ratio.
        #[arg(long)]
        oracle: bool,
        stream: PathBuf,
    },
    /// Approximate Min-SAT over an insertion-only stream file.
    Minsat {
        #[arg(long, value_enum, default_value = "settled")]
        algo: Algo,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long = "K", default_value_t = 4.0)]
        k: f64,
        #[arg(long, value_enum, default_value = "exact")]
        offline: OfflineArg,
        /// Occurrence bound per variable (freq only).
        #[arg(long)]
        f: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the exact optimum (separate pass) and the ratio.
        #[arg(long)]
        oracle: bool,
        stream: PathBuf,
    },
    /// Write a generated instance; with --out, also `<out>.json` with the ground truth.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        m: usize,
        /// Width of the shared conjunction system (default ceil(10 log2 m)).
        #[arg(long = "T")]
        t: Option<usize>,
        #[arg(long, default_value_t = 1)]
        min_len: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Occurrence bound (freq).
        #[arg(long, default_value_t = 4)]
        f: usize,
        /// Share of deletion events; makes a dynamic stream (random).
        #[arg(long, default_value_t = 0.0)]
        deletions: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment file; exit status 0 iff every threshold is met.
    Run { config: PathBuf },
    /// Exact optimum of a small stream.
    Oracle {
        #[arg(value_enum)]
        problem: OracleProblem,
        stream: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(alias = "exact")]
    ExactPerturb,
    #[value(alias = "lp")]
    LpRound,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Settled,
    Freq,
    F0,
}

#[derive(Clone, Copy, ValueEnum)]
enum OfflineArg {
    Exact,
    Kohli,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Ksat,
    Maxand,
    Minsat,
    Sk,
    Random,
    Freq,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleProblem {
    Maxsat,
    Minsat,
    Maxand,
}

fn read_stream(path: &Path) -> Result<StreamFile, AnyError> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(StreamFile::read(BufReader::new(file))?)
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("json value"));
}

/// Adds `opt` and `ratio` from an exact solve of the final clause set.
fn attach_oracle(v: &mut Value, sf: &StreamFile, objective: Objective) -> Result<(), AnyError> {
    let clauses = sf.final_clauses();
    let (a, opt) = exact_optimum(&clauses, sf.header.n, objective)?;
    let value = satstream::maxsat::evaluate(&Assignment::from_bitstring(v["assignment"].as_str().unwrap()).unwrap(), &clauses);
    let ratio = if opt == 0 { if value == 0 { 1.0 } else { f64::INFINITY } } else { value as f64 / opt as f64 };
    v["value"] = json!(value);
    v["opt"] = json!(opt);
    v["opt_assignment"] = json!(a.to_bitstring());
    v["ratio"] = json!(ratio);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn maxsat(
    mode: Mode,
    eps: f64,
    k: f64,
    seed: u64,
    one_literal: bool,
    budget: Option<u64>,
    dynamic: bool,
    oracle: bool,
    path: &Path,
) -> Result<(), AnyError> {
    let sf = read_stream(path)?;
    let params = Parameters::new(sf.header.n, sf.header.m, eps, k)?;
    let mode = match mode {
        Mode::ExactPerturb => PostProcess::ExactPerturb,
        Mode::LpRound => PostProcess::LpRound,
    };
    let kind = if dynamic { StreamMode::Dynamic } else { sf.header.mode };
    let mut cfg = MaxSatConfig::new(params, mode, kind)?;
    cfg.budget_words = budget;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = if one_literal {
        one_literal_branch(&sf.events, &cfg, &mut rng)?
    } else {
        stream_maxsat(&sf.events, &cfg, &mut rng)?
    };
    let mut v = json!({
        "assignment": out.assignment.to_bitstring(),
        "estimate": out.estimate,
        "estimate_conservative": out.estimate_conservative,
        "satisfied_on_sample": out.satisfied_on_sample,
        "small_clauses": out.small_clauses,
        "large_clauses": out.large_clauses,
        "branch": out.branch,
        "branch_taken": out.branch,
        "sample_source": out.sample.source,
        "beta": cfg.beta,
        "q": cfg.q,
        "sample_size": cfg.sample_size,
        "space_words": out.space.words_stored_peak,
        "space": out.space,
    });
    if oracle {
        attach_oracle(&mut v, &sf, Objective::Maximize)?;
    }
    print(&v);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn minsat(
    algo: Algo,
    eps: f64,
    k: f64,
    offline: OfflineArg,
    f: Option<usize>,
    delta: Option<f64>,
    seed: u64,
    oracle: bool,
    path: &Path,
) -> Result<(), AnyError> {
    let sf = read_stream(path)?;
    let n = sf.header.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = match algo {
        Algo::Settled => {
            let params = Parameters::new(n, sf.header.m, eps, k)?;
            let offline = match offline {
                OfflineArg::Exact => Offline::Exact,
                OfflineArg::Kohli => Offline::Kohli { reps: kohli_repetitions(n, eps) },
            };
            let cfg = MinSatConfig::new(params, offline)?;
            let out = minsat_subsampled(&sf.events, &cfg, &mut rng)?;
            json!({
                "assignment": out.assignment.to_bitstring(),
                "value_estimate": out.value_estimate,
                "guesses_run": out.guesses_run,
                "guesses_terminated": out.guesses_terminated,
                "settled_count": out.instances[out.chosen].settled_count,
                "instances": out.instances,
                "space": out.space,
            })
        }
        Algo::Freq => {
            let f = f.ok_or("--f is required for --algo freq")?;
            let out = minsat_bounded_freq(&sf.events, n, f)?;
            json!({
                "assignment": out.assignment.to_bitstring(),
                "value_estimate": out.value_bound,
                "opt_zero": out.opt_zero,
                "large_ignored": out.large_ignored,
                "guesses_run": 0,
                "guesses_terminated": 0,
                "settled_count": 0,
                "space": {"words_stored_peak": out.words},
            })
        }
        Algo::F0 => {
            let out = minsat_f0_bruteforce(&sf.events, n, eps, delta, rng.gen())?;
            json!({
                "assignment": out.assignment.to_bitstring(),
                "value_estimate": out.estimate,
                "k": out.k,
                "guesses_run": 0,
                "guesses_terminated": 0,
                "settled_count": 0,
                "space": {"words_stored_peak": out.words},
            })
        }
    };
    v["space_words"] = v["space"]["words_stored_peak"].clone();
    if oracle {
        attach_oracle(&mut v, &sf, Objective::Minimize)?;
    }
    print(&v);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gen(
    kind: GenKind,
    n: usize,
    k: usize,
    m: usize,
    t: Option<usize>,
    lens: (usize, usize),
    f: usize,
    deletions: f64,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), AnyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (stream, sidecar) = match kind {
        GenKind::Ksat => {
            let cfg = HardnessConfig::new(n, k, 1, seed);
            cfg.validate_ksat()?;
            let inst = IndexInstance::random(&vec![n / k; k], &mut rng);
            let cl = gen_ksat_index(&inst, &cfg)?;
            let bit = inst.target_bit();
            let side = json!({"ground_truth": bit, "index": inst.index, "expected_opt": cl.len() - bit as usize});
            (StreamFile::from_clauses(n, &cl), side)
        }
        GenKind::Maxand => {
            let mut cfg = HardnessConfig::new(n, 1, m, seed);
            cfg.t = t.unwrap_or_else(|| default_t(m));
            let inst = IndexInstance::random(&[m, n], &mut rng);
            let cl = gen_maxand_index(&inst, &cfg)?;
            let exclusive = pairwise_exclusive(&cl[..m]);
            let bit = inst.target_bit();
            let side = json!({
                "ground_truth": bit,
                "index": inst.index,
                "system_exclusive": exclusive,
                "expected_opt": exclusive.then_some(1 + bit as usize),
            });
            (StreamFile::from_clauses(n + cfg.t, &cl), side)
        }
        GenKind::Minsat => {
            let inst = IndexInstance::random(&[n], &mut rng);
            let cl = gen_minsat_index(&inst)?;
            let bit = inst.target_bit();
            (StreamFile::from_clauses(n, &cl), json!({"ground_truth": bit, "index": inst.index, "expected_opt": 1 - bit as usize}))
        }
        GenKind::Sk => {
            let cl = gen_sk(k)?;
            (StreamFile::from_clauses(k, &cl), json!({"ground_truth": null, "expected_opt": cl.len() - 1}))
        }
        GenKind::Random => {
            let cl = random_clauses(n, m, lens.0..=lens.1, seed)?;
            let sf = if deletions > 0.0 {
                dynamic_instance(n, &cl, deletions, lens.0..=lens.1, seed.wrapping_add(1))?
            } else {
                StreamFile::from_clauses(n, &cl)
            };
            (sf, json!({"ground_truth": null, "expected_opt": null}))
        }
        GenKind::Freq => (bounded_frequency_instance(n, f, lens.1, seed)?, json!({"ground_truth": null, "expected_opt": null})),
    };
    match out {
        Some(path) => {
            stream.write(std::io::BufWriter::new(File::create(&path)?))?;
            let mut side_path = path.into_os_string();
            side_path.push(".json");
            std::fs::write(side_path, serde_json::to_string_pretty(&sidecar)? + "\n")?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            stream.write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn run(path: &Path) -> Result<bool, AnyError> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)?;
    let report = run_experiment(&cfg)?;
    print!("{}", report.to_json_lines());
    Ok(report.all_passed())
}

fn oracle(problem: OracleProblem, path: &Path) -> Result<(), AnyError> {
    let sf = read_stream(path)?;
    let clauses = sf.final_clauses();
    let n = sf.header.n;
    let (a, opt) = match problem {
        OracleProblem::Maxsat => exact_optimum(&clauses, n, Objective::Maximize)?,
        OracleProblem::Minsat => exact_optimum(&clauses, n, Objective::Minimize)?,
        OracleProblem::Maxand => exact_maxand(&clauses, n)?,
    };
    print(&json!({"opt": opt, "assignment": a.to_bitstring(), "clauses": clauses.len()}));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Maxsat { mode, eps, k, seed, one_literal, budget, dynamic, oracle, stream } => {
            maxsat(mode, eps, k, seed, one_literal, budget, dynamic, oracle, &stream).map(|_| true)
        }
        Cmd::Minsat { algo, eps, k, offline, f, delta, seed, oracle, stream } => {
            minsat(algo, eps, k, offline, f, delta, seed, oracle, &stream).map(|_| true)
        }
        Cmd::Gen { kind, n, k, m, t, min_len, max_len, f, deletions, seed, out } => {
            gen(kind, n, k, m, t, (min_len, max_len), f, deletions, seed, out).map(|_| true)
        }
        Cmd::Run { config } => run(&config),
        Cmd::Oracle { problem, stream } => oracle(problem, &stream).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("satstream: {e}");
            ExitCode::from(2)
        }
    }
}
