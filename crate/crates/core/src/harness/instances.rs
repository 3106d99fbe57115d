//! Reproducible random corpora.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, ClauseKind, Header, Literal, StreamEvent, StreamFile, StreamMode, normalize_clause};

use super::HarnessError;

fn random_clause<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> Clause {
    let vars = rand::seq::index::sample(rng, n, len);
    let lits = vars.iter().map(|v| Literal::new(v as u32 + 1, rng.gen()));
    normalize_clause(lits, ClauseKind::Disjunctive).unwrap().expect("distinct variables")
}

/// `m` distinct disjunctions over distinct variables. Each attempt draws the
/// length uniformly from `sizes` and then the clause uniformly among those of
/// that length, so a nearly exhausted length class does not stall generation.
pub fn random_clauses(n: usize, m: usize, sizes: RangeInclusive<usize>, seed: u64) -> Result<Vec<Clause>, HarnessError> {
    if n == 0 || sizes.is_empty() || *sizes.start() == 0 || *sizes.end() > n {
        return Err(HarnessError::Config(format!("clause sizes {sizes:?} invalid for n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    let limit = 50 * m + 10_000;
    for _ in 0..limit {
        if out.len() == m {
            break;
        }
        let len = rng.gen_range(sizes.clone());
        let c = random_clause(&mut rng, n, len);
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    if out.len() < m {
        return Err(HarnessError::Config(format!("could not draw {m} distinct clauses with n = {n}, sizes {sizes:?}")));
    }
    Ok(out)
}

/// Insertion-only stream of [`random_clauses`].
pub fn random_instance(n: usize, m: usize, sizes: RangeInclusive<usize>, seed: u64) -> Result<StreamFile, HarnessError> {
    Ok(StreamFile::from_clauses(n, &random_clauses(n, m, sizes, seed)?))
}

/// Random disjunctions in which no variable occurs more than `f` times;
/// clauses are added until every variable is used up.
pub fn bounded_frequency_instance(n: usize, f: usize, max_len: usize, seed: u64) -> Result<StreamFile, HarnessError> {
    if n == 0 || f == 0 || max_len == 0 {
        return Err(HarnessError::Config("n, f and the clause length must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left = vec![f; n];
    let mut out = Vec::new();
    loop {
        let avail: Vec<usize> = (0..n).filter(|&v| left[v] > 0).collect();
        if avail.is_empty() {
            break;
        }
        let k = rng.gen_range(1..=max_len.min(avail.len()));
        let lits: Vec<Literal> = avail
            .choose_multiple(&mut rng, k)
            .map(|&v| {
                left[v] -= 1;
                Literal::new(v as u32 + 1, rng.gen())
            })
            .collect();
        out.push(normalize_clause(lits, ClauseKind::Disjunctive)?.expect("distinct variables"));
    }
    Ok(StreamFile::from_clauses(n, &out))
}

/// A dynamic stream whose live set at the end is exactly `final_clauses`:
/// extra clauses, distinct from everything else, are inserted and later
/// deleted so that deletions make up `deletion_fraction` of all events.
pub fn dynamic_instance(
    n: usize,
    final_clauses: &[Clause],
    deletion_fraction: f64,
    sizes: RangeInclusive<usize>,
    seed: u64,
) -> Result<StreamFile, HarnessError> {
    if !(0.0..0.5).contains(&deletion_fraction) {
        return Err(HarnessError::Config(format!("deletion fraction {deletion_fraction} outside [0, 1/2)")));
    }
    let m = final_clauses.len();
    // d / (m + 2d) = fraction.
    let d = (deletion_fraction * m as f64 / (1.0 - 2.0 * deletion_fraction)).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Clause> = final_clauses.iter().cloned().collect();
    if seen.len() != m {
        return Err(HarnessError::Config("final clauses must be distinct".into()));
    }
    let mut ghosts = Vec::with_capacity(d);
    for _ in 0..50 * d + 10_000 {
        if ghosts.len() == d {
            break;
        }
        let len = rng.gen_range(sizes.clone());
        let c = random_clause(&mut rng, n, len);
        if seen.insert(c.clone()) {
            ghosts.push(c);
        }
    }
    if ghosts.len() < d {
        return Err(HarnessError::Config("not enough distinct clauses for the deletions".into()));
    }
    // Slot i < m is a final clause; slots m + 2g and m + 2g + 1 belong to
    // ghost g, and the earlier of its two positions is the insertion.
    let mut slots: Vec<usize> = (0..m + 2 * d).collect();
    slots.shuffle(&mut rng);
    let mut inserted = vec![false; d];
    let events = slots
        .into_iter()
        .map(|s| {
            if s < m {
                StreamEvent::insert(final_clauses[s].clone())
            } else {
                let g = (s - m) / 2;
                let ev = if inserted[g] { StreamEvent::delete(ghosts[g].clone()) } else { StreamEvent::insert(ghosts[g].clone()) };
                inserted[g] = true;
                ev
            }
        })
        .collect();
    let header = Header { n, m: (m + d).max(1), mode: StreamMode::Dynamic, kind: ClauseKind::Disjunctive };
    Ok(StreamFile::new(header, events))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{DuplicatePolicy, LiveClauseSet, Op};

    #[test]
    fn random_instance_is_reproducible_and_well_formed() {
        let a = random_instance(10, 200, 2..=5, 3).unwrap();
        let b = random_instance(10, 200, 2..=5, 3).unwrap();
        assert_eq!(a.render(), b.render());
        assert_eq!(a.events.len(), 200);
        let distinct: HashSet<_> = a.events.iter().map(|e| e.clause.clone()).collect();
        assert_eq!(distinct.len(), 200);
        assert!(a.events.iter().all(|e| (2..=5).contains(&e.clause.len())));
        assert_ne!(a.render(), random_instance(10, 200, 2..=5, 4).unwrap().render());
    }

    #[test]
    fn exhausted_size_class_does_not_stall() {
        // Only 2n = 8 unit clauses exist; the rest must come from length 2.
        let cl = random_clauses(4, 30, 1..=2, 0).unwrap();
        assert_eq!(cl.len(), 30);
        assert!(random_clauses(3, 100, 1..=1, 0).is_err());
        assert!(random_clauses(3, 1, 0..=2, 0).is_err());
        assert!(random_clauses(3, 1, 2..=4, 0).is_err());
    }

    #[test]
    fn bounded_frequency_respects_f() {
        let sf = bounded_frequency_instance(12, 4, 6, 1).unwrap();
        let mut occ = [0usize; 12];
        for e in &sf.events {
            for l in e.clause.literals() {
                occ[l.var() as usize - 1] += 1;
            }
        }
        assert!(occ.iter().all(|&o| o == 4));
    }

    #[test]
    fn dynamic_stream_ends_with_the_final_set() {
        let fin = random_clauses(10, 300, 1..=4, 5).unwrap();
        let sf = dynamic_instance(10, &fin, 0.3, 1..=4, 6).unwrap();
        let deletions = sf.events.iter().filter(|e| e.op == Op::Delete).count();
        assert!((deletions as f64 / sf.events.len() as f64 - 0.3).abs() < 0.01);
        let mut live = LiveClauseSet::new();
        for e in &sf.events {
            live.apply(e, StreamMode::Dynamic, DuplicatePolicy::Strict).unwrap();
        }
        let mut got = sf.final_clauses();
        let mut want = fin.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }
}
