use rand::Rng;

use crate::cnf::{Assignment, Clause};

/// Randomized greedy 2-approximation (in expectation) for Min-SAT.
///
/// Variables are fixed in order `x_1, x_2, …`. With `a` (resp. `b`) the number
/// of not-yet-satisfied clauses that setting `x_i` true (resp. false) would
/// satisfy, `x_i` becomes true with probability `b / (a + b)`; when both are
/// zero it becomes false.
pub fn kohli_greedy<R: Rng + ?Sized>(clauses: &[Clause], n: usize, rng: &mut R) -> (Assignment, usize) {
    let n = n.max(clauses.iter().map(|c| c.max_var() as usize).max().unwrap_or(0));
    let mut occ = vec![Vec::new(); 2 * n];
    for (j, c) in clauses.iter().enumerate() {
        for l in c.literals() {
            occ[l.code() as usize].push(j);
        }
    }
    let mut satisfied = vec![false; clauses.len()];
    let mut value = 0;
    let mut a = Assignment::all(n, false);
    for v in 0..n {
        let fresh = |code: usize, sat: &[bool]| occ[code].iter().filter(|&&j| !sat[j]).count();
        let (pos, neg) = (2 * v, 2 * v + 1);
        let a_i = fresh(pos, &satisfied);
        let b_i = fresh(neg, &satisfied);
        let truth = a_i + b_i > 0 && rng.gen_range(0..a_i + b_i) < b_i;
        a.set(v as u32 + 1, truth);
        for &j in &occ[if truth { pos } else { neg }] {
            if !satisfied[j] {
                satisfied[j] = true;
                value += 1;
            }
        }
    }
    (a, value)
}

/// Best of `reps` independent greedy runs.
pub fn kohli_repeated<R: Rng + ?Sized>(clauses: &[Clause], n: usize, reps: usize, rng: &mut R) -> (Assignment, usize) {
    let mut best = kohli_greedy(clauses, n, rng);
    for _ in 1..reps.max(1) {
        let cand = kohli_greedy(clauses, n, rng);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// `ceil(ln(n) / eps)` repetitions, at least one.
pub fn kohli_repetitions(n: usize, eps: f64) -> usize {
    (((n.max(2)) as f64).ln() / eps).ceil().max(1.0) as usize
}
