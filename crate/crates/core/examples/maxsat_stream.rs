//! Streams a random instance through both Max-SAT pipelines and compares
//! against the exact optimum.
//!
//!     cargo run --release --example maxsat_stream

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satstream::cnf::{Parameters, StreamFile, StreamMode};
use satstream::harness::random_clauses;
use satstream::maxsat::{evaluate, exact_maxsat, stream_maxsat, MaxSatConfig, PostProcess};

fn main() {
    let (n, m) = (16, 4000);
    let clauses = random_clauses(n, m, 1..=6, 7).expect("instance");
    let stream = StreamFile::from_clauses(n, &clauses);
    let (_, opt) = exact_maxsat(&clauses, n).expect("16 variables is within the exact guard");
    println!("n = {n}, m = {m}, OPT = {opt}");

    let params = Parameters::new(n, m, 0.15, 1.0).unwrap();
    for mode in [PostProcess::ExactPerturb, PostProcess::LpRound] {
        let cfg = MaxSatConfig::new(params, mode, StreamMode::Static).unwrap();
        let out = stream_maxsat(&stream.events, &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let value = evaluate(&out.assignment, &clauses);
        println!(
            "{mode:?}: sample {} of {} clauses, {} words peak, satisfies {value} ({:.3} of OPT), estimate {:.0}",
            out.sample.achieved,
            out.small_clauses,
            out.space.words_stored_peak,
            value as f64 / opt as f64,
            out.estimate
        );
    }
}
