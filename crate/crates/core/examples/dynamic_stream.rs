//! A stream with insertions and deletions: the L0-sampled pipeline sees only
//! the clauses that survive.
//!
//!     cargo run --release --example dynamic_stream

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satstream::cnf::{Op, Parameters, StreamMode};
use satstream::harness::{dynamic_instance, random_clauses};
use satstream::maxsat::{evaluate, exact_maxsat, stream_maxsat, MaxSatConfig, PostProcess};

fn main() {
    let n = 10;
    let live = random_clauses(n, 1500, 1..=4, 3).unwrap();
    let stream = dynamic_instance(n, &live, 0.3, 1..=4, 4).unwrap();
    let deletes = stream.events.iter().filter(|e| e.op == Op::Delete).count();
    println!("{} events, {deletes} deletions, {} live at the end", stream.events.len(), live.len());

    let params = Parameters::new(n, stream.header.m, 0.2, 1.0).unwrap();
    let cfg = MaxSatConfig::new(params, PostProcess::LpRound, StreamMode::Dynamic).unwrap();
    let out = stream_maxsat(&stream.events, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    let (_, opt) = exact_maxsat(&live, n).unwrap();
    let value = evaluate(&out.assignment, &live);
    println!(
        "sample source {:?}, {} distinct samples, {} words peak",
        out.sample.source, out.sample.achieved, out.space.words_stored_peak
    );
    println!("satisfies {value} of OPT {opt} ({:.3})", value as f64 / opt as f64);
}
