//! Min-SAT with geometric guesses of the optimum: each guess subsamples the
//! stream and runs the settled-variable algorithm.
//!
//!     cargo run --release --example minsat_settled

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satstream::cnf::{Parameters, StreamFile};
use satstream::harness::random_clauses;
use satstream::maxsat::{evaluate, exact_optimum, Objective};
use satstream::minsat::{minsat_subsampled, MinSatConfig, Offline};

fn main() {
    let (n, m) = (10, 5000);
    let clauses = random_clauses(n, m, 1..=6, 99).unwrap();
    let stream = StreamFile::from_clauses(n, &clauses);
    let cfg = MinSatConfig::new(Parameters::new(n, m, 0.2, 1.0).unwrap(), Offline::Exact).unwrap();
    let out = minsat_subsampled(&stream.events, &cfg, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();

    println!("{:>8} {:>8} {:>8} {:>8} {:>10}", "guess", "p", "sampled", "settled", "estimate");
    for r in &out.instances {
        let est = r.estimate.map_or("terminated".to_string(), |e| format!("{e:.0}"));
        println!("{:>8} {:>8.4} {:>8} {:>8} {:>10}", r.guesses[0], r.p, r.sampled, r.settled_count, est);
    }
    let (_, opt) = exact_optimum(&clauses, n, Objective::Minimize).unwrap();
    let value = evaluate(&out.assignment, &clauses);
    println!("chosen guess {}: satisfies {value}, OPT {opt}", out.instances[out.chosen].guesses[0]);
    let (_, best) = out.select_by_full_evaluation(&clauses);
    println!("best surviving instance by full evaluation: {best}");
}
