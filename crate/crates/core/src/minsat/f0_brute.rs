//! Min-SAT value by brute force over literal choices, with each literal's
//! clause set summarized by a bottom-k sketch. An assignment satisfies
//! exactly the union of `S_ℓ` over its true literals, so its value is the
//! distinct count of that union.

use crate::cnf::{Assignment, Clause, Literal, StreamEvent};
use crate::maxsat::TooManyVariables;
use crate::samplers::F0Sketch;

use super::{inserted, MinSatError};

pub const F0_VAR_LIMIT: usize = 25;

/// One sketch per literal over clause stream positions, all sharing a seed.
#[derive(Clone, Debug)]
pub struct LiteralSketchBank {
    n: usize,
    sketches: Vec<F0Sketch>,
    position: u64,
}

impl LiteralSketchBank {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        LiteralSketchBank { n, sketches: vec![F0Sketch::new(k, seed); 2 * n], position: 0 }
    }

    pub fn push(&mut self, c: &Clause) {
        for l in c.literals() {
            self.sketches[l.code() as usize].insert(self.position);
        }
        self.position += 1;
    }

    pub fn sketch(&self, lit: Literal) -> &F0Sketch {
        &self.sketches[lit.code() as usize]
    }

    pub fn clauses_seen(&self) -> u64 {
        self.position
    }

    pub fn words(&self) -> u64 {
        self.sketches.iter().map(F0Sketch::words).sum()
    }

    /// Smallest estimated coverage over all `2^n` assignments. Ties go to the
    /// lexicographically first assignment (`x_1` first, false before true).
    pub fn min_coverage(&self) -> (Assignment, f64) {
        let mut best = (f64::INFINITY, Vec::new());
        let mut choice = Vec::with_capacity(self.n);
        let empty = F0Sketch::new(self.sketches.first().map_or(1, F0Sketch::k), self.sketches.first().map_or(0, F0Sketch::seed));
        self.descend(&empty, &mut choice, &mut best);
        (Assignment::from_bools(best.1), best.0)
    }

    fn descend(&self, acc: &F0Sketch, choice: &mut Vec<bool>, best: &mut (f64, Vec<bool>)) {
        if choice.len() == self.n {
            let e = acc.estimate();
            if e < best.0 {
                *best = (e, choice.clone());
            }
            return;
        }
        let var = choice.len() as u32 + 1;
        for value in [false, true] {
            let lit = Literal::new(var, !value);
            let merged = acc.merge(self.sketch(lit)).expect("bank sketches share seed and k");
            choice.push(value);
            self.descend(&merged, choice, best);
            choice.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct F0Outcome {
    pub assignment: Assignment,
    pub estimate: f64,
    pub k: usize,
    pub words: u64,
}

/// `delta` is the overall failure probability (default `1/n`); each of the
/// `2^n` union estimates gets `delta / 2^n`.
pub fn minsat_f0_bruteforce<'a, I>(events: I, n: usize, eps: f64, delta: Option<f64>, seed: u64) -> Result<F0Outcome, MinSatError>
where
    I: IntoIterator<Item = &'a StreamEvent>,
{
    if n > F0_VAR_LIMIT {
        return Err(TooManyVariables { vars: n, limit: F0_VAR_LIMIT }.into());
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(MinSatError::Config(format!("eps = {eps} outside (0, 1)")));
    }
    let delta = delta.unwrap_or(1.0 / n.max(2) as f64);
    if !(delta > 0.0 && delta < 1.0) {
        return Err(MinSatError::Config(format!("delta = {delta} outside (0, 1)")));
    }
    let k = F0Sketch::retention_for(eps, delta / 2f64.powi(n as i32));
    let mut bank = LiteralSketchBank::new(n, k, seed);
    for ev in events {
        let c = inserted(ev)?;
        c.check_vars(n)?;
        bank.push(c);
    }
    let (assignment, estimate) = bank.min_coverage();
    Ok(F0Outcome { assignment, estimate, k, words: bank.words() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxsat::evaluate;

    fn events(cl: &[Clause]) -> Vec<StreamEvent> {
        cl.iter().cloned().map(StreamEvent::insert).collect()
    }

    #[test]
    fn small_coverage_example() {
        let cl = [Clause::or(&[1]), Clause::or(&[-1]), Clause::or(&[2])];
        let out = minsat_f0_bruteforce(&events(&cl), 2, 0.2, None, 7).unwrap();
        assert_eq!(out.estimate, 1.0);
        assert_eq!(evaluate(&out.assignment, &cl), 1);
        assert!(!out.assignment.get(2));
    }

    #[test]
    fn single_clause_can_be_falsified() {
        let cl = [Clause::or(&[1, -2, 3])];
        let out = minsat_f0_bruteforce(&events(&cl), 3, 0.2, None, 1).unwrap();
        assert_eq!(out.estimate, 0.0);
        assert_eq!(evaluate(&out.assignment, &cl), 0);
    }

    #[test]
    fn guard_and_shared_seed() {
        let r = minsat_f0_bruteforce(&[], 26, 0.2, None, 0);
        assert!(matches!(r, Err(MinSatError::TooManyVariables(_))));
        let bank = LiteralSketchBank::new(3, 10, 42);
        for code in 0..6 {
            let s = bank.sketch(Literal::from_code(code));
            assert_eq!((s.k(), s.seed()), (10, 42));
        }
    }
}
