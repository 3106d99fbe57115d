//! Bottom-k distinct counting, sketch merging, and the sketch-based Min-SAT
//! brute force.
//!
//!     cargo run --release --example f0_sketch

use satstream::cnf::StreamFile;
use satstream::harness::random_clauses;
use satstream::maxsat::{exact_optimum, Objective};
use satstream::minsat::minsat_f0_bruteforce;
use satstream::samplers::F0Sketch;

fn main() {
    let mut a = F0Sketch::with_accuracy(0.1, 0.05, 42);
    let mut b = F0Sketch::with_accuracy(0.1, 0.05, 42);
    for x in 0..60_000u64 {
        a.insert(x);
    }
    for x in 40_000..100_000u64 {
        b.insert(x);
    }
    let union = a.merge(&b).unwrap();
    println!("k = {}: |A| ~ {:.0}, |B| ~ {:.0}, |A u B| ~ {:.0} (true 100000)", a.k(), a.estimate(), b.estimate(), union.estimate());
    let restored = F0Sketch::from_bytes(&union.to_bytes()).unwrap();
    assert_eq!(restored, union);

    let n = 8;
    let clauses = random_clauses(n, 2000, 1..=5, 3).unwrap();
    let stream = StreamFile::from_clauses(n, &clauses);
    let out = minsat_f0_bruteforce(&stream.events, n, 0.2, None, 7).unwrap();
    let (_, opt) = exact_optimum(&clauses, n, Objective::Minimize).unwrap();
    println!("min coverage estimate {:.0} vs exact {opt}, {} words of sketches", out.estimate, out.words);
}
