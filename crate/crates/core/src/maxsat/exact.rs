//! Exact optimum by depth-first branch and bound.
//!
//! Clause state is maintained incrementally: per clause the number of
//! unassigned literals and the depth that satisfied it, per literal the number
//! of open clauses reduced to that single literal. For every unassigned
//! variable `v`, at most `max(#unit(x_v), #unit(¬x_v))` of its open unit
//! clauses can be satisfied, which gives the bound used for pruning in both
//! directions.

use thiserror::Error;

use crate::cnf::{Assignment, Clause, ClauseKind};

/// Largest number of distinct occurring variables the exact solvers accept.
pub const EXACT_VAR_LIMIT: usize = 30;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("{vars} variables occur, exact search is limited to {limit}")]
pub struct TooManyVariables {
    pub vars: usize,
    pub limit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Maximize,
    Minimize,
}

const NONE: u32 = u32::MAX;
const UNSET: u8 = 2;

struct Search {
    objective: Objective,
    clauses: Vec<Vec<u32>>,
    occ: Vec<Vec<u32>>,
    rem: Vec<u32>,
    sat_by: Vec<u32>,
    val: Vec<u8>,
    unit: Vec<u32>,
    penalty: i64,
    sat: i64,
    open: i64,
    order: Vec<u32>,
    pref: Vec<bool>,
    best: i64,
    best_vals: Vec<bool>,
}

impl Search {
    fn adjust_unit(&mut self, code: u32, up: bool) {
        let v = (code >> 1) as usize;
        let before = self.unit[2 * v].min(self.unit[2 * v + 1]) as i64;
        if up {
            self.unit[code as usize] += 1;
        } else {
            self.unit[code as usize] -= 1;
        }
        let after = self.unit[2 * v].min(self.unit[2 * v + 1]) as i64;
        self.penalty += after - before;
    }

    fn unassigned_literal(&self, c: usize) -> u32 {
        *self.clauses[c]
            .iter()
            .find(|&&code| self.val[(code >> 1) as usize] == UNSET)
            .expect("open clause with remaining literals")
    }

    fn assign(&mut self, v: u32, value: bool, depth: u32) {
        self.val[v as usize] = value as u8;
        let t = 2 * v + (!value) as u32;
        let f = t ^ 1;
        for i in 0..self.occ[t as usize].len() {
            let c = self.occ[t as usize][i] as usize;
            let old = self.rem[c];
            self.rem[c] -= 1;
            if self.sat_by[c] == NONE {
                if old == 1 {
                    self.adjust_unit(t, false);
                }
                self.sat_by[c] = depth;
                self.sat += 1;
                self.open -= 1;
            }
        }
        for i in 0..self.occ[f as usize].len() {
            let c = self.occ[f as usize][i] as usize;
            let old = self.rem[c];
            self.rem[c] -= 1;
            if self.sat_by[c] == NONE {
                if old == 1 {
                    self.adjust_unit(f, false);
                    self.open -= 1;
                } else if old == 2 {
                    let o = self.unassigned_literal(c);
                    self.adjust_unit(o, true);
                }
            }
        }
    }

    fn unassign(&mut self, v: u32, value: bool, depth: u32) {
        let t = 2 * v + (!value) as u32;
        let f = t ^ 1;
        for i in 0..self.occ[f as usize].len() {
            let c = self.occ[f as usize][i] as usize;
            if self.sat_by[c] == NONE {
                match self.rem[c] {
                    0 => {
                        self.adjust_unit(f, true);
                        self.open += 1;
                    }
                    1 => {
                        let o = self.unassigned_literal(c);
                        self.adjust_unit(o, false);
                    }
                    _ => {}
                }
            }
            self.rem[c] += 1;
        }
        for i in 0..self.occ[t as usize].len() {
            let c = self.occ[t as usize][i] as usize;
            self.rem[c] += 1;
            if self.sat_by[c] == depth {
                self.sat_by[c] = NONE;
                self.sat -= 1;
                self.open += 1;
                if self.rem[c] == 1 {
                    self.adjust_unit(t, true);
                }
            }
        }
        self.val[v as usize] = UNSET;
    }

    fn pruned(&self) -> bool {
        match self.objective {
            Objective::Maximize => self.sat + self.open - self.penalty <= self.best,
            Objective::Minimize => self.sat + self.penalty >= self.best,
        }
    }

    fn dfs(&mut self, depth: usize) {
        if self.pruned() {
            return;
        }
        if depth == self.order.len() || self.open == 0 {
            // Every remaining clause is decided, so `sat` is the exact value
            // of any completion.
            self.best = self.sat;
            self.best_vals = self.val.iter().map(|&x| x == 1).collect();
            return;
        }
        let v = self.order[depth];
        let first = self.pref[v as usize];
        for value in [first, !first] {
            self.assign(v, value, depth as u32);
            self.dfs(depth + 1);
            self.unassign(v, value, depth as u32);
        }
    }
}

/// Optimal assignment and value for disjunctive `clauses` over `x_1..x_n`.
/// Variables that do not occur are set to false.
pub fn exact_optimum(clauses: &[Clause], n: usize, objective: Objective) -> Result<(Assignment, usize), TooManyVariables> {
    debug_assert!(clauses.iter().all(|c| c.kind() == ClauseKind::Disjunctive));
    let n = n.max(clauses.iter().map(|c| c.max_var() as usize).max().unwrap_or(0));
    let mut compact = vec![NONE; n + 1];
    let mut originals: Vec<u32> = Vec::new();
    for c in clauses {
        for l in c.literals() {
            if compact[l.var() as usize] == NONE {
                compact[l.var() as usize] = originals.len() as u32;
                originals.push(l.var());
            }
        }
    }
    let k = originals.len();
    if k > EXACT_VAR_LIMIT {
        return Err(TooManyVariables { vars: k, limit: EXACT_VAR_LIMIT });
    }

    let coded: Vec<Vec<u32>> = clauses
        .iter()
        .map(|c| c.literals().iter().map(|l| 2 * compact[l.var() as usize] + l.is_negated() as u32).collect())
        .collect();
    let mut occ = vec![Vec::new(); 2 * k];
    for (j, c) in coded.iter().enumerate() {
        for &code in c {
            occ[code as usize].push(j as u32);
        }
    }
    let mut order: Vec<u32> = (0..k as u32).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(occ[2 * v as usize].len() + occ[2 * v as usize + 1].len()));
    // Try the polarity that helps the objective first: the majority sign when
    // maximizing, the minority sign when minimizing.
    let pref: Vec<bool> = (0..k)
        .map(|v| {
            let (p, q) = (occ[2 * v].len(), occ[2 * v + 1].len());
            match objective {
                Objective::Maximize => p >= q,
                Objective::Minimize => p < q,
            }
        })
        .collect();
    let start = Assignment::from_bools(pref.clone());
    let start_value = coded
        .iter()
        .filter(|c| c.iter().any(|&code| start.values()[(code >> 1) as usize] == (code & 1 == 0)))
        .count() as i64;

    let m = coded.len();
    let mut s = Search {
        objective,
        rem: coded.iter().map(|c| c.len() as u32).collect(),
        clauses: coded,
        occ,
        sat_by: vec![NONE; m],
        val: vec![UNSET; k],
        unit: vec![0; 2 * k],
        penalty: 0,
        sat: 0,
        open: m as i64,
        order,
        pref: pref.clone(),
        best: start_value,
        best_vals: pref,
    };
    for j in 0..m {
        if s.clauses[j].len() == 1 {
            let code = s.clauses[j][0];
            s.adjust_unit(code, true);
        }
    }
    s.dfs(0);

    let mut a = Assignment::all(n, false);
    for (cv, &orig) in originals.iter().enumerate() {
        a.set(orig, s.best_vals[cv]);
    }
    Ok((a, s.best as usize))
}

/// Maximum number of simultaneously satisfiable clauses.
pub fn exact_maxsat(clauses: &[Clause], n: usize) -> Result<(Assignment, usize), TooManyVariables> {
    exact_optimum(clauses, n, Objective::Maximize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxsat::evaluate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(clauses: &[Clause], n: usize) -> (usize, usize) {
        let vals: Vec<usize> = (0..1u64 << n).map(|mask| evaluate(&Assignment::from_mask(n, mask), clauses)).collect();
        (*vals.iter().min().unwrap(), *vals.iter().max().unwrap())
    }

    fn random_clauses(rng: &mut ChaCha8Rng, n: usize, m: usize, max_len: usize) -> Vec<Clause> {
        (0..m)
            .filter_map(|_| {
                let len = rng.gen_range(1..=max_len);
                let lits: Vec<i64> = (0..len)
                    .map(|_| {
                        let v = rng.gen_range(1..=n as i64);
                        if rng.gen_bool(0.5) { v } else { -v }
                    })
                    .collect();
                Clause::from_dimacs(&lits, n, ClauseKind::Disjunctive).unwrap()
            })
            .collect()
    }

    #[test]
    fn tiny_cases() {
        let (a, v) = exact_maxsat(&[Clause::or(&[1])], 1).unwrap();
        assert_eq!((a.get(1), v), (true, 1));
        let s2 = [Clause::or(&[1, 2]), Clause::or(&[-1, 2]), Clause::or(&[1, -2]), Clause::or(&[-1, -2])];
        assert_eq!(exact_maxsat(&s2, 2).unwrap().1, 3);
        assert_eq!(exact_maxsat(&[], 4).unwrap(), (Assignment::all(4, false), 0));
    }

    #[test]
    fn agrees_with_enumeration_both_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..300 {
            let n = rng.gen_range(1..=9);
            let m = rng.gen_range(0..=40);
            let cl = random_clauses(&mut rng, n, m, 4);
            let (lo, hi) = brute(&cl, n);
            let (amax, vmax) = exact_optimum(&cl, n, Objective::Maximize).unwrap();
            let (amin, vmin) = exact_optimum(&cl, n, Objective::Minimize).unwrap();
            assert_eq!(vmax, hi, "trial {trial}");
            assert_eq!(vmin, lo, "trial {trial}");
            assert_eq!(evaluate(&amax, &cl), hi);
            assert_eq!(evaluate(&amin, &cl), lo);
        }
    }

    #[test]
    fn guard_counts_occurring_variables() {
        let cl: Vec<Clause> = (1..=31).map(|v| Clause::or(&[v])).collect();
        assert_eq!(exact_maxsat(&cl, 31).unwrap_err(), TooManyVariables { vars: 31, limit: 30 });
        // Declared n may be larger than the occurring set.
        assert_eq!(exact_maxsat(&[Clause::or(&[40])], 40).unwrap().1, 1);
    }

    #[test]
    fn twenty_variables_three_thousand_clauses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cl = random_clauses(&mut rng, 20, 3000, 8);
        let (a, v) = exact_maxsat(&cl, 20).unwrap();
        assert_eq!(evaluate(&a, &cl), v);
        assert!(v >= cl.len().div_ceil(2));
    }
}
