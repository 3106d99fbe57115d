//! Generators and exhaustive verifiers for the lower-bound constructions:
//! the unsatisfiable `S_k` systems, the Index reductions to k-SAT, Max-AND and
//! Min-SAT, and an exact Max-AND oracle.

mod maxand;
mod reductions;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Clause, ClauseKind, CnfError};

pub use maxand::{compatible, default_t, exact_maxand, gen_and_system, pairwise_exclusive, MAXAND_CLAUSE_LIMIT};
pub use reductions::{gen_ksat_index, gen_maxand_index, gen_minsat_index, ksat_var};

/// Largest `k` accepted by [`gen_sk`].
pub const SK_LIMIT: usize = 20;
/// Largest variable count for exhaustive satisfiability checks.
pub const VERIFY_VAR_LIMIT: usize = 25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardnessError {
    #[error("k = {0} outside 1..={SK_LIMIT}")]
    KTooLarge(usize),
    #[error("expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("{vars} variables, exhaustive search is limited to {limit}")]
    TooManyVariables { vars: usize, limit: usize },
    #[error("{clauses} clauses, limit is {limit}")]
    InstanceTooLarge { clauses: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Cnf(#[from] CnfError),
}

/// Alice's bits and Bob's index. `dims` gives the shape of the bit array
/// (one entry for a scalar index, `[n/k; k]` for k-SAT, `[m, n]` for
/// Max-AND); positions are 0-based and the first coordinate is most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexInstance {
    pub bits: Vec<bool>,
    pub dims: Vec<usize>,
    pub index: Vec<usize>,
}

impl IndexInstance {
    pub fn new(bits: Vec<bool>, dims: Vec<usize>, index: Vec<usize>) -> Result<Self, HardnessError> {
        let inst = IndexInstance { bits, dims, index };
        inst.validate()?;
        Ok(inst)
    }

    /// Uniform bits and a uniform index.
    pub fn random<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Self {
        let t = dims.iter().product();
        IndexInstance {
            bits: (0..t).map(|_| rng.gen()).collect(),
            dims: dims.to_vec(),
            index: dims.iter().map(|&d| rng.gen_range(0..d)).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), HardnessError> {
        let t: usize = self.dims.iter().product();
        if self.bits.len() != t {
            return Err(HardnessError::DimensionMismatch {
                expected: format!("{t} bits"),
                got: format!("{} bits", self.bits.len()),
            });
        }
        if self.index.len() != self.dims.len() || self.index.iter().zip(&self.dims).any(|(i, d)| i >= d) {
            return Err(HardnessError::DimensionMismatch {
                expected: format!("index within {:?}", self.dims),
                got: format!("{:?}", self.index),
            });
        }
        Ok(())
    }

    pub fn position(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.dims).fold(0, |acc, (c, d)| acc * d + c)
    }

    pub fn coords(&self, mut pos: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = pos % d;
            pos /= d;
        }
        out
    }

    /// `A_i`, the answer to the Index problem.
    pub fn target_bit(&self) -> bool {
        self.bits[self.position(&self.index)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardnessConfig {
    /// Variables and clause width for the k-SAT reduction.
    pub n: usize,
    pub k: usize,
    /// Size of the shared conjunction system for Max-AND.
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub seed: u64,
}

impl HardnessConfig {
    pub fn new(n: usize, k: usize, m: usize, seed: u64) -> Self {
        HardnessConfig { n, k, m, t: default_t(m), seed }
    }

    /// The k-SAT path needs `k ≤ n/e` and `k | n`.
    pub fn validate_ksat(&self) -> Result<(), HardnessError> {
        if self.k == 0 || self.k as f64 > self.n as f64 / std::f64::consts::E {
            return Err(HardnessError::Config(format!("k = {} exceeds n/e for n = {}", self.k, self.n)));
        }
        if self.n % self.k != 0 {
            return Err(HardnessError::Config(format!("k = {} does not divide n = {}", self.k, self.n)));
        }
        Ok(())
    }

    pub fn validate_maxand(&self) -> Result<(), HardnessError> {
        if self.m == 0 || self.n == 0 || self.t == 0 {
            return Err(HardnessError::Config("m, n and T must be positive".into()));
        }
        Ok(())
    }
}

/// The `2^k` disjunctions over `x_1..x_k`, one per sign pattern; the clause
/// for subset mask `S` negates exactly the variables in `S`.
pub fn gen_sk(k: usize) -> Result<Vec<Clause>, HardnessError> {
    if k == 0 || k > SK_LIMIT {
        return Err(HardnessError::KTooLarge(k));
    }
    Ok((0..1u32 << k).map(|s| sk_clause(&(1..=k as u32).collect::<Vec<_>>(), s)).collect())
}

/// Claim-1 clause over `vars`, negating `vars[b]` when bit `b` of `mask` is set.
pub(crate) fn sk_clause(vars: &[u32], mask: u32) -> Clause {
    let lits: Vec<i64> = vars
        .iter()
        .enumerate()
        .map(|(b, &v)| if mask >> b & 1 == 1 { -(v as i64) } else { v as i64 })
        .collect();
    Clause::or(&lits)
}

/// An assignment satisfying every clause, found by exhaustive search over the
/// variables `1..=n` (`n` at least the largest variable that occurs).
pub fn verify_all_satisfiable(clauses: &[Clause], n: usize) -> Result<Option<Assignment>, HardnessError> {
    let n = n.max(clauses.iter().map(|c| c.max_var() as usize).max().unwrap_or(0));
    if n > VERIFY_VAR_LIMIT {
        return Err(HardnessError::TooManyVariables { vars: n, limit: VERIFY_VAR_LIMIT });
    }
    let masks: Vec<(u32, u32, ClauseKind)> = clauses
        .iter()
        .map(|c| {
            let (mut pos, mut neg) = (0u32, 0u32);
            for l in c.literals() {
                let bit = 1 << (l.var() - 1);
                if l.is_negated() {
                    neg |= bit;
                } else {
                    pos |= bit;
                }
            }
            (pos, neg, c.kind())
        })
        .collect();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let found = (0..=full).find(|&a| {
        masks.iter().all(|&(pos, neg, kind)| match kind {
            ClauseKind::Disjunctive => a & pos != 0 || !a & neg != 0,
            ClauseKind::Conjunctive => a & pos == pos && !a & neg == neg,
        })
    });
    Ok(found.map(|a| Assignment::from_mask(n, a as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn sk_small_cases() {
        assert_eq!(gen_sk(1).unwrap(), vec![Clause::or(&[1]), Clause::or(&[-1])]);
        let s2 = gen_sk(2).unwrap();
        for c in [Clause::or(&[1, 2]), Clause::or(&[-1, 2]), Clause::or(&[1, -2]), Clause::or(&[-1, -2])] {
            assert!(s2.contains(&c));
        }
        assert_eq!(gen_sk(3).unwrap().len(), 8);
        assert_eq!(gen_sk(0), Err(HardnessError::KTooLarge(0)));
        assert_eq!(gen_sk(21), Err(HardnessError::KTooLarge(21)));
    }

    #[test]
    fn claim_one_exhaustively() {
        for k in 1..=4 {
            let sk = gen_sk(k).unwrap();
            assert_eq!(verify_all_satisfiable(&sk, k).unwrap(), None, "k = {k}");
            for drop in 0..sk.len() {
                let mut rest = sk.clone();
                let removed = rest.remove(drop);
                let w = verify_all_satisfiable(&rest, k).unwrap().expect("satisfiable");
                assert!(!removed.is_satisfied_by(&w));
            }
        }
    }

    #[test]
    fn verifier_edge_cases() {
        assert!(verify_all_satisfiable(&[], 3).unwrap().is_some());
        assert!(verify_all_satisfiable(&[Clause::and(&[1, -2]), Clause::and(&[2])], 2).unwrap().is_none());
        assert!(matches!(verify_all_satisfiable(&[Clause::or(&[26])], 0), Err(HardnessError::TooManyVariables { .. })));
    }

    #[test]
    fn index_positions_round_trip() {
        let inst = IndexInstance::random(&[3, 3, 3], &mut rand_chacha::ChaCha8Rng::seed_from_u64(0));
        for p in 0..27 {
            assert_eq!(inst.position(&inst.coords(p)), p);
        }
        assert_eq!(inst.position(&[1, 0, 2]), 11);
        assert!(IndexInstance::new(vec![true; 5], vec![2, 3], vec![0, 0]).is_err());
        assert!(IndexInstance::new(vec![true; 6], vec![2, 3], vec![2, 0]).is_err());
    }
}
