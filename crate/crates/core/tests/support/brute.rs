//! Exhaustive oracles and small random instance makers, independent of the
//! library's own solvers and generators.

use rand::Rng;
use satstream::cnf::{Assignment, Clause};

/// Number of clauses satisfied by `mask` (bit `i` is variable `i + 1`).
pub fn satisfied(clauses: &[Clause], mask: u64) -> usize {
    clauses
        .iter()
        .filter(|c| {
            c.to_dimacs().iter().any(|&l| {
                let bit = mask >> (l.unsigned_abs() - 1) & 1 == 1;
                if l > 0 { bit } else { !bit }
            })
        })
        .count()
}

pub fn min_sat(clauses: &[Clause], n: usize) -> usize {
    (0..1u64 << n).map(|m| satisfied(clauses, m)).min().unwrap()
}

pub fn max_sat(clauses: &[Clause], n: usize) -> usize {
    (0..1u64 << n).map(|m| satisfied(clauses, m)).max().unwrap()
}

pub fn value_of(clauses: &[Clause], a: &Assignment) -> usize {
    let mask = (0..a.len()).filter(|&i| a.get(i as u32 + 1)).fold(0u64, |m, i| m | 1 << i);
    satisfied(clauses, mask)
}

/// Clauses over distinct variables with lengths in `lens`.
pub fn random_cnf<R: Rng>(rng: &mut R, n: usize, m: usize, lens: std::ops::RangeInclusive<usize>) -> Vec<Clause> {
    skewed_cnf(rng, n, m, lens, 0.5)
}

/// Like `random_cnf`, each literal positive with probability `pos`.
pub fn skewed_cnf<R: Rng>(rng: &mut R, n: usize, m: usize, lens: std::ops::RangeInclusive<usize>, pos: f64) -> Vec<Clause> {
    (0..m)
        .map(|_| {
            let k = rng.gen_range(lens.clone()).min(n);
            let mut vars: Vec<i64> = (1..=n as i64).collect();
            for i in 0..k {
                let j = rng.gen_range(i..n);
                vars.swap(i, j);
            }
            let lits: Vec<i64> = vars[..k].iter().map(|&v| if rng.gen_bool(pos) { v } else { -v }).collect();
            Clause::or(&lits)
        })
        .collect()
}

/// Random clauses in which every variable occurs at most `f` times.
pub fn random_bounded<R: Rng>(rng: &mut R, n: usize, f: usize, max_len: usize) -> Vec<Clause> {
    let mut left = vec![f; n];
    let mut out = Vec::new();
    loop {
        let avail: Vec<usize> = (0..n).filter(|&v| left[v] > 0).collect();
        if avail.is_empty() {
            return out;
        }
        let k = rng.gen_range(1..=max_len.min(avail.len()));
        let mut pick = avail.clone();
        for i in 0..k {
            let j = rng.gen_range(i..pick.len());
            pick.swap(i, j);
        }
        let lits: Vec<i64> = pick[..k]
            .iter()
            .map(|&v| {
                left[v] -= 1;
                let x = v as i64 + 1;
                if rng.gen() { x } else { -x }
            })
            .collect();
        out.push(Clause::or(&lits));
    }
}

/// `(min, max)` satisfied count over all `2^n` assignments, walking a Gray
/// code so each step only revisits the clauses of one variable.
pub fn gray_extremes(clauses: &[Clause], n: usize) -> (usize, usize) {
    let mut occ: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut true_lits = vec![0u32; clauses.len()];
    for (j, c) in clauses.iter().enumerate() {
        for &l in &c.to_dimacs() {
            occ[l.unsigned_abs() as usize - 1].push((j, l < 0));
            if l < 0 {
                true_lits[j] += 1;
            }
        }
    }
    let mut sat = true_lits.iter().filter(|&&t| t > 0).count();
    let (mut lo, mut hi) = (sat, sat);
    let mut value = vec![false; n];
    for i in 1u64..1 << n {
        let v = i.trailing_zeros() as usize;
        value[v] = !value[v];
        for &(j, negated) in &occ[v] {
            if value[v] != negated {
                true_lits[j] += 1;
                if true_lits[j] == 1 {
                    sat += 1;
                }
            } else {
                true_lits[j] -= 1;
                if true_lits[j] == 0 {
                    sat -= 1;
                }
            }
        }
        lo = lo.min(sat);
        hi = hi.max(sat);
    }
    (lo, hi)
}
