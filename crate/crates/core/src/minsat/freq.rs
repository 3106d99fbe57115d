use crate::cnf::{Assignment, Clause, StreamEvent};

use super::{inserted, MinSatError};

/// Tracks which signs each variable occurs with. The optimum is zero iff no
/// variable occurs both ways: then falsifying every occurrence is possible.
#[derive(Clone, Debug)]
pub struct OptZeroDetector {
    pos: Vec<bool>,
    neg: Vec<bool>,
}

impl OptZeroDetector {
    pub fn new(n: usize) -> Self {
        OptZeroDetector { pos: vec![false; n], neg: vec![false; n] }
    }

    pub fn push(&mut self, c: &Clause) {
        for l in c.literals() {
            let v = l.var() as usize - 1;
            if l.is_negated() {
                self.neg[v] = true;
            } else {
                self.pos[v] = true;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pos.iter().zip(&self.neg).all(|(&p, &n)| !(p && n))
    }

    /// Positive-only variables false, negative-only true, absent ones false.
    pub fn witness(&self) -> Option<Assignment> {
        self.is_zero().then(|| Assignment::from_bools(self.neg.clone()))
    }

    pub fn words(&self) -> u64 {
        2 * self.pos.len() as u64
    }
}

pub fn detect_opt_zero<'a, I>(events: I, n: usize) -> Result<(bool, Option<Assignment>), MinSatError>
where
    I: IntoIterator<Item = &'a StreamEvent>,
{
    let mut d = OptZeroDetector::new(n);
    for ev in events {
        let c = inserted(ev)?;
        c.check_vars(n)?;
        d.push(c);
    }
    Ok((d.is_zero(), d.witness()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundedFreqOutcome {
    pub assignment: Assignment,
    /// Upper bound on the clauses `assignment` satisfies: every ignored large
    /// clause plus `Σ |S_ℓ|` over the chosen literals. Zero when the
    /// opt-zero witness is used.
    pub value_bound: usize,
    pub opt_zero: bool,
    pub large_ignored: usize,
    /// Clauses longer than this were ignored.
    pub size_threshold: f64,
    pub words: u64,
}

/// Sets `x_i` true iff the small clauses containing `x_i` are no more
/// numerous than those containing `¬x_i` (ties go to true). Clauses with
/// more than `sqrt(f n)` literals are ignored; there are fewer than
/// `sqrt(f n)` of them when every variable occurs at most `f` times.
pub fn minsat_bounded_freq<'a, I>(events: I, n: usize, f: usize) -> Result<BoundedFreqOutcome, MinSatError>
where
    I: IntoIterator<Item = &'a StreamEvent>,
{
    if f == 0 {
        return Err(MinSatError::Config("f must be positive".into()));
    }
    let threshold = ((f * n) as f64).sqrt();
    let mut occurrences = vec![0usize; n];
    let mut small = vec![0usize; 2 * n];
    let mut large = 0;
    let mut zero = OptZeroDetector::new(n);
    for ev in events {
        let c = inserted(ev)?;
        c.check_vars(n)?;
        for l in c.literals() {
            let o = &mut occurrences[l.var() as usize - 1];
            *o += 1;
            if *o > f {
                return Err(MinSatError::FrequencyBoundViolated { var: l.var(), f });
            }
        }
        zero.push(c);
        if c.len() as f64 > threshold {
            large += 1;
        } else {
            for l in c.literals() {
                small[l.code() as usize] += 1;
            }
        }
    }
    let words = (n + 2 * n + 1) as u64 + zero.words();
    if let Some(w) = zero.witness() {
        return Ok(BoundedFreqOutcome {
            assignment: w,
            value_bound: 0,
            opt_zero: true,
            large_ignored: large,
            size_threshold: threshold,
            words,
        });
    }
    let mut a = Assignment::all(n, false);
    let mut bound = large;
    for v in 0..n {
        let (sp, sn) = (small[2 * v], small[2 * v + 1]);
        a.set(v as u32 + 1, sp <= sn);
        bound += sp.min(sn);
    }
    Ok(BoundedFreqOutcome { assignment: a, value_bound: bound, opt_zero: false, large_ignored: large, size_threshold: threshold, words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::StreamFile;
    use crate::maxsat::evaluate;

    fn events(cl: &[Clause]) -> Vec<StreamEvent> {
        cl.iter().cloned().map(StreamEvent::insert).collect()
    }

    #[test]
    fn opt_zero_examples() {
        let (z, w) = detect_opt_zero(&events(&[Clause::or(&[1, 2])]), 2).unwrap();
        assert!(z);
        assert_eq!(w.unwrap(), Assignment::all(2, false));
        let (z, w) = detect_opt_zero(&events(&[Clause::or(&[1]), Clause::or(&[-1])]), 1).unwrap();
        assert!(!z && w.is_none());
        let (z, w) = detect_opt_zero(&[], 3).unwrap();
        assert!(z);
        assert_eq!(w.unwrap(), Assignment::all(3, false));
        let (_, w) = detect_opt_zero(&events(&[Clause::or(&[-1, 2])]), 2).unwrap();
        assert_eq!(w.unwrap(), Assignment::from_bools(vec![true, false]));
    }

    #[test]
    fn singletons_once_each_give_zero() {
        let cl = [Clause::or(&[1]), Clause::or(&[-2]), Clause::or(&[3])];
        let out = minsat_bounded_freq(&events(&cl), 3, 1).unwrap();
        assert!(out.opt_zero);
        assert_eq!(out.value_bound, 0);
        assert_eq!(evaluate(&out.assignment, &cl), 0);
    }

    #[test]
    fn frequency_violation_is_reported() {
        let cl = [Clause::or(&[1, 2]), Clause::or(&[-1]), Clause::or(&[1, -2])];
        let r = minsat_bounded_freq(&events(&cl), 2, 2);
        assert_eq!(r, Err(MinSatError::FrequencyBoundViolated { var: 1, f: 2 }));
    }

    #[test]
    fn large_clause_is_ignored_but_counted() {
        // f = 1, n = 4: threshold 2, so the 3-literal clause is large.
        let cl = [Clause::or(&[1, 2, 3]), Clause::or(&[-4])];
        let sf = StreamFile::from_clauses(4, &cl);
        let out = minsat_bounded_freq(&sf.events, 4, 1).unwrap();
        assert_eq!(out.large_ignored, 1);
        // Both sign patterns are one-sided, so the witness still wins.
        assert!(out.opt_zero);
        let cl = [Clause::or(&[1, 2, 3]), Clause::or(&[-4]), Clause::or(&[4])];
        let out = minsat_bounded_freq(&events(&cl), 4, 2).unwrap();
        assert!(!out.opt_zero);
        assert!(evaluate(&out.assignment, &cl) <= out.value_bound);
    }

    #[test]
    fn ties_go_to_true() {
        let cl = [Clause::or(&[1]), Clause::or(&[-1])];
        let out = minsat_bounded_freq(&events(&cl), 1, 2).unwrap();
        assert!(out.assignment.get(1));
        assert_eq!(out.value_bound, 1);
    }
}
