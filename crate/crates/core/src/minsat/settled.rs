//! Settled-variable algorithm for Min-SAT with a known bound `u ≥ OPT`.
//!
//! If a literal occurs in more than `u` clauses, making it true would satisfy
//! more than `OPT` clauses, so its variable is fixed ("settled") to the value
//! that makes it false. Clauses containing a literal that settled true are
//! satisfied in every optimal solution and only counted; settled-false
//! literals are stripped from everything stored.

use rand::Rng;

use crate::cnf::{Assignment, Clause, Literal};
use crate::maxsat::{exact_optimum, Objective};
use crate::space::clause_words;

use super::kohli::kohli_repeated;
use super::{MinSatError, Offline};

#[derive(Clone, Debug)]
pub struct SettledState {
    n: usize,
    u: u64,
    settled: Vec<Option<bool>>,
    /// Stored clauses containing each literal, indexed by `Literal::code`.
    counts: Vec<u64>,
    stored: Vec<Clause>,
    stored_words: u64,
    forced: u64,
    ignored: u64,
    emptied: u64,
    peak_stored: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SettledOutcome {
    pub assignment: Assignment,
    /// Offline value on the stored clauses plus the forced count.
    pub value: usize,
    pub forced: u64,
    pub settled_count: usize,
}

impl SettledState {
    pub fn new(n: usize, u: u64) -> Self {
        assert!(u >= 1, "u must be positive");
        SettledState {
            n,
            u,
            settled: vec![None; n],
            counts: vec![0; 2 * n],
            stored: Vec::new(),
            stored_words: 0,
            forced: 0,
            ignored: 0,
            emptied: 0,
            peak_stored: 0,
        }
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn settled_value(&self, var: u32) -> Option<bool> {
        self.settled[var as usize - 1]
    }

    pub fn settled_count(&self) -> usize {
        self.settled.iter().filter(|s| s.is_some()).count()
    }

    pub fn stored(&self) -> &[Clause] {
        &self.stored
    }

    pub fn peak_stored(&self) -> usize {
        self.peak_stored
    }

    /// Clauses satisfied by settled values: counted in every completion.
    pub fn forced(&self) -> u64 {
        self.forced
    }

    /// Arriving clauses that were already satisfied by a settled literal.
    pub fn ignored(&self) -> u64 {
        self.ignored
    }

    /// Clauses whose literals all settled false; they cost nothing.
    pub fn emptied(&self) -> u64 {
        self.emptied
    }

    pub fn count(&self, lit: Literal) -> u64 {
        self.counts[lit.code() as usize]
    }

    /// Stored clauses plus one word per literal counter and per status.
    pub fn words(&self) -> u64 {
        self.stored_words + 3 * self.n as u64
    }

    fn literal_is_true(&self, l: Literal) -> Option<bool> {
        self.settled[l.var() as usize - 1].map(|v| v != l.is_negated())
    }

    pub fn update(&mut self, c: &Clause) {
        if c.literals().iter().any(|&l| self.literal_is_true(l) == Some(true)) {
            self.forced += 1;
            self.ignored += 1;
            return;
        }
        let Some(reduced) = c.without(|l| self.literal_is_true(l) == Some(false)) else {
            self.emptied += 1;
            return;
        };
        for l in reduced.literals() {
            self.counts[l.code() as usize] += 1;
        }
        self.stored_words += clause_words(&reduced);
        self.stored.push(reduced.clone());
        self.peak_stored = self.peak_stored.max(self.stored.len());
        for &l in reduced.literals() {
            if self.settled[l.var() as usize - 1].is_none() && self.counts[l.code() as usize] > self.u {
                self.settle_false(l);
            }
        }
        debug_assert!(self.stored.len() as u64 <= 2 * self.n as u64 * self.u);
    }

    fn settle_false(&mut self, l: Literal) {
        let v = l.var();
        self.settled[v as usize - 1] = Some(l.is_negated());
        let mut kept = Vec::with_capacity(self.stored.len());
        for c in std::mem::take(&mut self.stored) {
            self.stored_words -= clause_words(&c);
            if c.contains(l.negate()) {
                self.forced += 1;
                for x in c.literals() {
                    self.counts[x.code() as usize] -= 1;
                }
            } else if c.contains(l) {
                self.counts[l.code() as usize] -= 1;
                match c.without(|x| x == l) {
                    Some(r) => {
                        self.stored_words += clause_words(&r);
                        kept.push(r);
                    }
                    None => self.emptied += 1,
                }
            } else {
                self.stored_words += clause_words(&c);
                kept.push(c);
            }
        }
        self.stored = kept;
        debug_assert_eq!(self.counts[l.code() as usize], 0);
        debug_assert_eq!(self.counts[l.negate().code() as usize], 0);
    }

    /// Runs the offline algorithm on the stored clauses (all over unsettled
    /// variables) and merges the result with the settled values.
    pub fn finish<R: Rng + ?Sized>(&self, offline: Offline, rng: &mut R) -> Result<SettledOutcome, MinSatError> {
        let (mut a, v) = match offline {
            Offline::Exact => exact_optimum(&self.stored, self.n, Objective::Minimize)?,
            Offline::Kohli { reps } => kohli_repeated(&self.stored, self.n, reps, rng),
        };
        for (i, s) in self.settled.iter().enumerate() {
            if let Some(val) = s {
                a.set(i as u32 + 1, *val);
            }
        }
        Ok(SettledOutcome {
            assignment: a,
            value: v + self.forced as usize,
            forced: self.forced,
            settled_count: self.settled_count(),
        })
    }
}

/// Runs the settled-variable algorithm over `clauses` and finishes offline.
pub fn settled_minsat<'a, I, R>(clauses: I, n: usize, u: u64, offline: Offline, rng: &mut R) -> Result<SettledOutcome, MinSatError>
where
    I: IntoIterator<Item = &'a Clause>,
    R: Rng + ?Sized,
{
    let mut st = SettledState::new(n, u);
    for c in clauses {
        st.update(c);
    }
    st.finish(offline, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxsat::evaluate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn literal_over_threshold_settles_false() {
        let mut st = SettledState::new(3, 1);
        st.update(&Clause::or(&[1, 2]));
        st.update(&Clause::or(&[1, 3]));
        assert_eq!(st.settled_value(1), Some(false));
        assert_eq!(st.stored(), &[Clause::or(&[2]), Clause::or(&[3])]);
    }

    #[test]
    fn settled_false_literal_is_stripped_on_arrival() {
        let mut st = SettledState::new(3, 2);
        for c in [Clause::or(&[1, -2]), Clause::or(&[1, 2]), Clause::or(&[1, 3])] {
            st.update(&c);
        }
        assert_eq!(st.settled_value(1), Some(false));
        st.update(&Clause::or(&[1, 2, -3]));
        assert_eq!(st.stored().last().unwrap(), &Clause::or(&[2, -3]));
        assert_eq!(st.stored().len(), 4);
        assert_eq!(st.count(Literal::pos(2)), 2);
    }

    #[test]
    fn clause_with_settled_true_literal_is_only_counted() {
        let mut st = SettledState::new(2, 1);
        st.update(&Clause::or(&[1]));
        st.update(&Clause::or(&[1, 2]));
        // x1 settled false, so ¬x1 is true.
        let (stored, forced) = (st.stored().to_vec(), st.forced());
        st.update(&Clause::or(&[-1, 2]));
        assert_eq!(st.stored(), &stored[..]);
        assert_eq!(st.forced(), forced + 1);
        assert_eq!(st.ignored(), 1);
    }

    #[test]
    fn all_settled_gives_forced_count() {
        let mut st = SettledState::new(1, 1);
        for c in [Clause::or(&[1]), Clause::or(&[-1])] {
            st.update(&c);
        }
        // A second (¬x1) pushes ¬x1 past u: x1 settles true, (x1) is forced
        // and both (¬x1) clauses empty out.
        st.update(&Clause::or(&[-1]));
        let out = st.finish(Offline::Exact, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(st.settled_value(1), Some(true));
        assert_eq!(st.emptied(), 2);
        assert!(st.stored().is_empty());
        assert_eq!(out.value as u64, st.forced());
        assert_eq!(out.value, 1);
    }

    #[test]
    fn exact_finish_without_settling_is_global_optimum() {
        let cl = vec![Clause::or(&[1, 2]), Clause::or(&[-1, 3]), Clause::or(&[-2, -3]), Clause::or(&[2])];
        let out = settled_minsat(&cl, 3, 100, Offline::Exact, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(out.settled_count, 0);
        let brute = (0..8u64).map(|m| evaluate(&Assignment::from_mask(3, m), &cl)).min().unwrap();
        assert_eq!(out.value, brute);
        assert_eq!(evaluate(&out.assignment, &cl), brute);
    }
}
