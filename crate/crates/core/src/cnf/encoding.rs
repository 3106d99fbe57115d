//! Bijective ranking of small literal sets into `[0, N)`,
//! `N = C(2n,1) + ... + C(2n,beta)`.
//!
//! Sets are ordered by size, then lexicographically by their sorted literal
//! codes (see [`Literal::code`]). The universe counts every `i`-subset of the
//! `2n` signed literals, so some ranks decode to sets containing both `x` and
//! `¬x`; [`ClauseUniverse::decode`] reports those as `NotNormalized`.

use super::{normalize_clause, Clause, ClauseKind, CnfError, Literal};

#[derive(Clone, Debug)]
pub struct ClauseUniverse {
    n: usize,
    beta: usize,
    /// `binom[a][b] = C(a, b)` for `a <= 2n`, `b <= beta`.
    binom: Vec<Vec<u128>>,
    /// `offsets[s]` is the rank of the first set of size `s`; `offsets[beta+1] = N`.
    offsets: Vec<u128>,
}

impl ClauseUniverse {
    /// Sizes above `2n` are empty, so `beta` is clamped to `2n`.
    pub fn new(n: usize, beta: usize) -> Result<Self, CnfError> {
        let codes = 2 * n;
        let beta = beta.min(codes);
        let mut binom = vec![vec![0u128; beta + 1]; codes + 1];
        for a in 0..=codes {
            binom[a][0] = 1;
            for b in 1..=beta.min(a) {
                let left = if b <= a - 1 { binom[a - 1][b] } else { 0 };
                binom[a][b] = binom[a - 1][b - 1]
                    .checked_add(left)
                    .ok_or(CnfError::UniverseTooLarge)?;
            }
        }
        let mut offsets = vec![0u128; beta + 2];
        for s in 1..=beta {
            offsets[s + 1] = offsets[s]
                .checked_add(binom[codes][s])
                .ok_or(CnfError::UniverseTooLarge)?;
        }
        Ok(ClauseUniverse { n, beta, binom, offsets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest encodable clause size.
    pub fn beta(&self) -> usize {
        self.beta
    }

    /// Number of encodable literal sets, `N`.
    pub fn size(&self) -> u128 {
        self.offsets[self.beta + 1]
    }

    fn c(&self, a: usize, b: usize) -> u128 {
        if b > a {
            0
        } else {
            self.binom[a][b]
        }
    }

    /// Rank of a strictly increasing code sequence.
    pub fn rank_codes(&self, codes: &[u32]) -> Result<u128, CnfError> {
        let k = codes.len();
        if k == 0 {
            return Err(CnfError::EmptyClause);
        }
        if k > self.beta {
            return Err(CnfError::ClauseTooLarge { size: k, beta: self.beta });
        }
        let total = 2 * self.n;
        let mut rank = self.offsets[k];
        let mut lo = 0usize;
        for (i, &c) in codes.iter().enumerate() {
            let c = c as usize;
            debug_assert!(c >= lo && c < total, "codes must be increasing and in range");
            // Sets that agree on positions < i and have a smaller code at i.
            let r = k - i;
            rank += self.c(total - lo, r) - self.c(total - c, r);
            lo = c + 1;
        }
        Ok(rank)
    }

    pub fn unrank_codes(&self, idx: u128) -> Result<Vec<u32>, CnfError> {
        if idx >= self.size() {
            return Err(CnfError::IndexOutOfRange(idx));
        }
        let k = (1..=self.beta).find(|&s| idx < self.offsets[s + 1]).expect("idx < N");
        let total = 2 * self.n;
        let mut rest = idx - self.offsets[k];
        let mut out = Vec::with_capacity(k);
        let mut v = 0usize;
        for i in 0..k {
            loop {
                let count = self.c(total - 1 - v, k - 1 - i);
                if rest < count {
                    break;
                }
                rest -= count;
                v += 1;
            }
            out.push(v as u32);
            v += 1;
        }
        Ok(out)
    }

    pub fn index(&self, c: &Clause) -> Result<u128, CnfError> {
        c.check_vars(self.n)?;
        if c.len() > self.beta {
            return Err(CnfError::ClauseTooLarge { size: c.len(), beta: self.beta });
        }
        // Literal order (var, negated) coincides with code order.
        let codes: Vec<u32> = c.literals().iter().map(|l| l.code()).collect();
        self.rank_codes(&codes)
    }

    /// Decodes a rank into a disjunctive clause.
    pub fn decode(&self, idx: u128) -> Result<Clause, CnfError> {
        let codes = self.unrank_codes(idx)?;
        normalize_clause(codes.into_iter().map(Literal::from_code), ClauseKind::Disjunctive)?
            .ok_or(CnfError::NotNormalized(idx))
    }
}

pub fn clause_index(c: &Clause, n: usize, beta: usize) -> Result<u128, CnfError> {
    if c.len() > beta {
        return Err(CnfError::ClauseTooLarge { size: c.len(), beta });
    }
    ClauseUniverse::new(n, beta)?.index(c)
}

pub fn clause_decode(idx: u128, n: usize, beta: usize) -> Result<Clause, CnfError> {
    ClauseUniverse::new(n, beta)?.decode(idx)
}
