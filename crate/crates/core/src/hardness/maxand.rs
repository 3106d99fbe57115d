use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Assignment, Clause, ClauseKind};

use super::HardnessError;

pub const MAXAND_CLAUSE_LIMIT: usize = 1000;

/// `ceil(10 log2 m)`, at least 1.
pub fn default_t(m: usize) -> usize {
    ((10.0 * (m.max(2) as f64).log2()).ceil() as usize).max(1)
}

/// Sign patterns of the shared system: `true` means negated.
pub(crate) fn and_patterns(m: usize, t: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| (0..t).map(|_| rng.gen()).collect()).collect()
}

/// `m` conjunctions of `T` literals over `z_1..z_T` (variables `1..=T`), each
/// sign a fair coin from `seed`.
pub fn gen_and_system(m: usize, t: usize, seed: u64) -> Vec<Clause> {
    assert!(t >= 1, "T must be positive");
    and_patterns(m, t, seed)
        .into_iter()
        .map(|pat| {
            let lits: Vec<i64> = pat.iter().enumerate().map(|(i, &neg)| if neg { -(i as i64 + 1) } else { i as i64 + 1 }).collect();
            Clause::and(&lits)
        })
        .collect()
}

/// Two conjunctions can hold together iff no variable appears in them with
/// opposite signs.
pub fn compatible(a: &Clause, b: &Clause) -> bool {
    let (mut i, mut j) = (0, 0);
    let (x, y) = (a.literals(), b.literals());
    while i < x.len() && j < y.len() {
        match x[i].var().cmp(&y[j].var()) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if x[i] != y[j] {
                    return false;
                }
                i += 1;
                j += 1;
            }
        }
    }
    true
}

/// No two of the conjunctions can be satisfied together.
pub fn pairwise_exclusive(clauses: &[Clause]) -> bool {
    clauses.iter().enumerate().all(|(i, a)| clauses[i + 1..].iter().all(|b| !compatible(a, b)))
}

/// Largest set of simultaneously satisfiable conjunctions. Conflicts are
/// pairwise, so this is a maximum clique of the compatibility graph.
pub fn exact_maxand(clauses: &[Clause], n: usize) -> Result<(Assignment, usize), HardnessError> {
    if clauses.len() > MAXAND_CLAUSE_LIMIT {
        return Err(HardnessError::InstanceTooLarge { clauses: clauses.len(), limit: MAXAND_CLAUSE_LIMIT });
    }
    if let Some(c) = clauses.iter().find(|c| c.kind() != ClauseKind::Conjunctive) {
        return Err(HardnessError::Config(format!("expected conjunctions, got {c:?}")));
    }
    let n = n.max(clauses.iter().map(|c| c.max_var() as usize).max().unwrap_or(0));
    let m = clauses.len();
    let adj: Vec<Vec<bool>> =
        (0..m).map(|i| (0..m).map(|j| i != j && compatible(&clauses[i], &clauses[j])).collect()).collect();
    let mut best = Vec::new();
    let mut cur = Vec::new();
    expand(&adj, &mut cur, (0..m).collect(), &mut best);
    let mut a = Assignment::all(n, false);
    for &i in &best {
        for l in clauses[i].literals() {
            a.set(l.var(), !l.is_negated());
        }
    }
    Ok((a, best.len()))
}

/// Branch and bound with a greedy colouring bound.
fn expand(adj: &[Vec<bool>], cur: &mut Vec<usize>, cand: Vec<usize>, best: &mut Vec<usize>) {
    let (order, colours) = colour_sort(adj, &cand);
    for idx in (0..order.len()).rev() {
        if cur.len() + colours[idx] <= best.len() {
            return;
        }
        let v = order[idx];
        cur.push(v);
        let next: Vec<usize> = order[..idx].iter().copied().filter(|&w| adj[v][w]).collect();
        if next.is_empty() {
            if cur.len() > best.len() {
                *best = cur.clone();
            }
        } else {
            expand(adj, cur, next, best);
        }
        cur.pop();
    }
}

/// Candidates ordered by colour class, with the class number (1-based) of
/// each; any clique within `order[..=i]` has at most `colours[i]` members.
fn colour_sort(adj: &[Vec<bool>], cand: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in cand {
        match classes.iter_mut().find(|cl| cl.iter().all(|&w| !adj[v][w])) {
            Some(cl) => cl.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut order = Vec::with_capacity(cand.len());
    let mut colours = Vec::with_capacity(cand.len());
    for (c, cl) in classes.into_iter().enumerate() {
        for v in cl {
            order.push(v);
            colours.push(c + 1);
        }
    }
    (order, colours)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxsat::evaluate;

    fn brute_maxand(cl: &[Clause], n: usize) -> usize {
        (0..1u64 << n).map(|m| evaluate(&Assignment::from_mask(n, m), cl)).max().unwrap()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(exact_maxand(&[Clause::and(&[1, -2])], 2).unwrap().1, 1);
        assert_eq!(exact_maxand(&[Clause::and(&[1]), Clause::and(&[-1])], 1).unwrap().1, 1);
        assert_eq!(exact_maxand(&[], 2).unwrap().1, 0);
    }

    #[test]
    fn one_bit_systems_show_both_outcomes() {
        let mut same = 0;
        for seed in 0..100 {
            let s = gen_and_system(2, 1, seed);
            same += compatible(&s[0], &s[1]) as usize;
            assert_eq!(compatible(&s[0], &s[1]), s[0] == s[1]);
        }
        assert!(same > 0 && same < 100, "{same}");
    }

    #[test]
    fn wide_systems_are_exclusive() {
        for seed in 0..100 {
            assert!(pairwise_exclusive(&gen_and_system(16, 40, seed)));
        }
    }

    #[test]
    fn clique_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = 8;
            let m = rng.gen_range(1..25);
            let cl: Vec<Clause> = (0..m)
                .map(|_| {
                    let k = rng.gen_range(1..=3);
                    let lits: Vec<i64> = (0..k)
                        .map(|_| rng.gen_range(1..=n as i64) * if rng.gen() { 1 } else { -1 })
                        .collect();
                    Clause::from_dimacs(&lits, n, ClauseKind::Conjunctive).ok().flatten()
                })
                .flatten()
                .collect();
            if cl.is_empty() {
                continue;
            }
            let (a, v) = exact_maxand(&cl, n).unwrap();
            assert_eq!(v, brute_maxand(&cl, n));
            assert_eq!(evaluate(&a, &cl), v);
        }
    }

    #[test]
    fn too_many_clauses() {
        let cl = vec![Clause::and(&[1]); MAXAND_CLAUSE_LIMIT + 1];
        assert!(matches!(exact_maxand(&cl, 1), Err(HardnessError::InstanceTooLarge { .. })));
    }
}
