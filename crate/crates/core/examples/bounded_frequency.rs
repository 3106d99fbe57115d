//! Min-SAT when every variable occurs in at most f clauses, plus the
//! opt-zero check and the randomized greedy for comparison.
//!
//!     cargo run --release --example bounded_frequency

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satstream::harness::bounded_frequency_instance;
use satstream::maxsat::{evaluate, exact_optimum, Objective};
use satstream::minsat::{detect_opt_zero, kohli_repeated, kohli_repetitions, minsat_bounded_freq};

fn main() {
    let (n, f) = (12, 4);
    let stream = bounded_frequency_instance(n, f, 6, 21).unwrap();
    let clauses = stream.final_clauses();
    let (_, opt) = exact_optimum(&clauses, n, Objective::Minimize).unwrap();

    let (zero, _) = detect_opt_zero(&stream.events, n).unwrap();
    let out = minsat_bounded_freq(&stream.events, n, f).unwrap();
    let value = evaluate(&out.assignment, &clauses);
    println!("{} clauses, OPT {opt}, opt-zero detector says {zero}", clauses.len());
    println!(
        "bounded-frequency rule: satisfies {value} (bound {}, guarantee {:.1}), ignored {} long clauses",
        out.value_bound,
        2.0 * ((f * n) as f64).sqrt() * opt.max(1) as f64,
        out.large_ignored
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (_, greedy) = kohli_repeated(&clauses, n, kohli_repetitions(n, 0.1), &mut rng);
    println!("randomized greedy, best of {} runs: {greedy}", kohli_repetitions(n, 0.1));
}
