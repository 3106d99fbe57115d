//! Clause and stream data model.
//!
//! Literals are signed variable indices (`var >= 1`). A [`Clause`] is always
//! normalized: literals sorted by `(var, negated)`, no repeated variable, never
//! empty. Disjunctive clauses that mention a variable with both signs are
//! trivially true and never become a `Clause` at all.

mod encoding;
mod stream;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use encoding::{clause_decode, clause_index, ClauseUniverse};
pub use stream::{
    parse_event, parse_header, render_event, DuplicatePolicy, Header, LiveClauseSet, Op,
    StreamEvent, StreamFile, StreamMode, StreamReader,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("empty clause")]
    EmptyClause,
    #[error("conjunction contains variable {0} with both signs")]
    ContradictoryConjunction(u32),
    #[error("variable {var} out of range 1..={n}")]
    VarOutOfRange { var: i64, n: usize },
    #[error("parse error on line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("clause of size {size} exceeds the encoding bound {beta}")]
    ClauseTooLarge { size: usize, beta: usize },
    #[error("index {0} outside the clause universe")]
    IndexOutOfRange(u128),
    #[error("rank {0} encodes a literal set with a complementary pair")]
    NotNormalized(u128),
    #[error("clause universe does not fit in 128 bits")]
    UniverseTooLarge,
    #[error("duplicate insert of a live clause {0}")]
    DuplicateInsert(String),
    #[error("delete of a clause that is not live: {0}")]
    DeleteOfAbsent(String),
    #[error("delete event in an insertion-only stream")]
    DeleteInStaticStream,
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for CnfError {
    fn from(e: std::io::Error) -> Self {
        CnfError::Io(e.to_string())
    }
}

/// A variable (1-based) with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    var: u32,
    negated: bool,
}

impl Literal {
    /// Panics if `var == 0`.
    pub fn new(var: u32, negated: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, negated }
    }

    pub fn pos(var: u32) -> Self {
        Literal::new(var, false)
    }

    pub fn neg(var: u32) -> Self {
        Literal::new(var, true)
    }

    /// DIMACS convention: `k > 0` is `x_k`, `k < 0` is `¬x_|k|`.
    pub fn from_dimacs(k: i64, n: usize) -> Result<Self, CnfError> {
        let var = k.unsigned_abs();
        if k == 0 || var > n as u64 {
            return Err(CnfError::VarOutOfRange { var: k, n });
        }
        Ok(Literal::new(var as u32, k < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, negated: !self.negated }
    }

    /// Dense code in `[0, 2n)`: `x_v -> 2(v-1)`, `¬x_v -> 2(v-1)+1`.
    pub fn code(self) -> u32 {
        2 * (self.var - 1) + self.negated as u32
    }

    pub fn from_code(code: u32) -> Self {
        Literal::new(code / 2 + 1, code % 2 == 1)
    }

    pub fn is_true_under(self, a: &Assignment) -> bool {
        a.get(self.var) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseKind {
    Disjunctive,
    Conjunctive,
}

/// A normalized clause. See the module docs for the invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: Vec<Literal>,
    kind: ClauseKind,
}

/// Sorts and deduplicates `raw`.
///
/// Returns `Ok(None)` for a disjunction containing some `x` and `¬x`, which is
/// trivially true and is dropped from the stream.
pub fn normalize_clause<I>(raw: I, kind: ClauseKind) -> Result<Option<Clause>, CnfError>
where
    I: IntoIterator<Item = Literal>,
{
    let mut lits: Vec<Literal> = raw.into_iter().collect();
    if lits.is_empty() {
        return Err(CnfError::EmptyClause);
    }
    lits.sort_unstable();
    lits.dedup();
    for w in lits.windows(2) {
        if w[0].var == w[1].var {
            return match kind {
                ClauseKind::Disjunctive => Ok(None),
                ClauseKind::Conjunctive => Err(CnfError::ContradictoryConjunction(w[0].var)),
            };
        }
    }
    Ok(Some(Clause { lits, kind }))
}

impl Clause {
    /// Builds a clause from DIMACS-style integers. Same semantics as
    /// [`normalize_clause`].
    pub fn from_dimacs(lits: &[i64], n: usize, kind: ClauseKind) -> Result<Option<Self>, CnfError> {
        let lits = lits
            .iter()
            .map(|&k| Literal::from_dimacs(k, n))
            .collect::<Result<Vec<_>, _>>()?;
        normalize_clause(lits, kind)
    }

    /// Disjunctive clause over DIMACS literals; panics if the input is not a
    /// valid, non-trivial clause. Intended for tests and examples.
    pub fn or(lits: &[i64]) -> Self {
        let n = lits.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(1);
        Clause::from_dimacs(lits, n, ClauseKind::Disjunctive)
            .expect("valid literals")
            .expect("not trivially true")
    }

    /// Conjunctive counterpart of [`Clause::or`].
    pub fn and(lits: &[i64]) -> Self {
        let n = lits.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(1);
        Clause::from_dimacs(lits, n, ClauseKind::Conjunctive)
            .expect("valid literals")
            .expect("conjunctions are never dropped")
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn kind(&self) -> ClauseKind {
        self.kind
    }

    pub fn max_var(&self) -> u32 {
        self.lits.last().map(|l| l.var).unwrap_or(0)
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn check_vars(&self, n: usize) -> Result<(), CnfError> {
        match self.lits.iter().find(|l| l.var as usize > n) {
            Some(l) => Err(CnfError::VarOutOfRange { var: l.to_dimacs(), n }),
            None => Ok(()),
        }
    }

    /// Disjunctive: some literal true. Conjunctive: all literals true.
    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        match self.kind {
            ClauseKind::Disjunctive => self.lits.iter().any(|l| l.is_true_under(a)),
            ClauseKind::Conjunctive => self.lits.iter().all(|l| l.is_true_under(a)),
        }
    }

    /// Copy of the clause without the literals for which `drop` is true, or
    /// `None` if nothing remains.
    pub fn without<F: Fn(Literal) -> bool>(&self, drop: F) -> Option<Clause> {
        let lits: Vec<Literal> = self.lits.iter().copied().filter(|&l| !drop(l)).collect();
        if lits.is_empty() {
            None
        } else {
            Some(Clause { lits, kind: self.kind })
        }
    }

    pub fn to_dimacs(&self) -> Vec<i64> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = match self.kind {
            ClauseKind::Disjunctive => " ∨ ",
            ClauseKind::Conjunctive => " ∧ ",
        };
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Total assignment to `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn all(n: usize, value: bool) -> Self {
        Assignment(vec![value; n])
    }

    pub fn from_bools(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    /// Bit `v-1` of `mask` is the value of `x_v`. Requires `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Assignment((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of `x_var`; panics when `var` is outside `1..=n`.
    pub fn get(&self, var: u32) -> bool {
        self.0[var as usize - 1]
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.0[var as usize - 1] = value;
    }

    pub fn flip(&mut self, var: u32) {
        let v = &mut self.0[var as usize - 1];
        *v = !*v;
    }

    pub fn complement(&self) -> Self {
        Assignment(self.0.iter().map(|v| !v).collect())
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// `x_1` first, `'1'` for true.
    pub fn to_bitstring(&self) -> String {
        self.0.iter().map(|&v| if v { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '1' => Some(true),
                '0' => Some(false),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
    }
}

/// Instance-level parameters shared by the streaming algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    /// Number of variables.
    pub n: usize,
    /// Upper bound on the number of clauses, known before the stream starts.
    pub m: usize,
    pub eps: f64,
    /// Sampling constant.
    #[serde(rename = "K")]
    pub k: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParameterError {
    #[error("n must be at least 1")]
    ZeroVariables,
    #[error("m must be at least 1")]
    ZeroClauses,
    #[error("eps = {0} outside (0, 1/4)")]
    Eps(f64),
    #[error("K = {0} must be positive")]
    K(f64),
}

impl Parameters {
    pub fn new(n: usize, m: usize, eps: f64, k: f64) -> Result<Self, ParameterError> {
        let p = Parameters { n, m, eps, k };
        p.validate()?;
        Ok(p)
    }

    /// `eps = 1/4` itself is rejected: the Min-SAT subsampling argument needs
    /// a strict inequality and the same cap applies everywhere.
    pub fn validate(&self) -> Result<(), ParameterError> {
        if self.n == 0 {
            return Err(ParameterError::ZeroVariables);
        }
        if self.m == 0 {
            return Err(ParameterError::ZeroClauses);
        }
        if !(self.eps > 0.0 && self.eps < 0.25) {
            return Err(ParameterError::Eps(self.eps));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(ParameterError::K(self.k));
        }
        Ok(())
    }

    /// `ln m`, floored at `ln 2` so tiny streams still get at least one trial.
    pub fn log_m(&self) -> f64 {
        (self.m.max(2) as f64).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(xs: &[i64]) -> Vec<Literal> {
        xs.iter().map(|&k| Literal::from_dimacs(k, 10).unwrap()).collect()
    }

    #[test]
    fn trivially_true_clause_is_dropped() {
        assert_eq!(normalize_clause(lits(&[1, -1, 2]), ClauseKind::Disjunctive), Ok(None));
    }

    #[test]
    fn duplicate_literals_removed_and_sorted() {
        let c = normalize_clause(lits(&[2, 1, 1]), ClauseKind::Disjunctive).unwrap().unwrap();
        assert_eq!(c.to_dimacs(), vec![1, 2]);
    }

    #[test]
    fn contradictory_conjunction_is_an_error() {
        assert_eq!(
            normalize_clause(lits(&[1, -1]), ClauseKind::Conjunctive),
            Err(CnfError::ContradictoryConjunction(1))
        );
    }

    #[test]
    fn empty_clause_is_an_error() {
        assert_eq!(normalize_clause(vec![], ClauseKind::Disjunctive), Err(CnfError::EmptyClause));
    }

    #[test]
    fn literal_order_puts_positive_first() {
        let c = Clause::or(&[-3, 3 - 1, -1]);
        assert_eq!(c.to_dimacs(), vec![-1, 2, -3]);
        assert!(Literal::pos(1) < Literal::neg(1));
        assert_eq!(Literal::pos(1).code(), 0);
        assert_eq!(Literal::neg(1).code(), 1);
        assert_eq!(Literal::from_code(5), Literal::neg(3));
    }

    #[test]
    fn var_range_checked() {
        assert!(matches!(Literal::from_dimacs(4, 3), Err(CnfError::VarOutOfRange { .. })));
        assert!(matches!(Literal::from_dimacs(0, 3), Err(CnfError::VarOutOfRange { .. })));
        assert!(Clause::or(&[1, 5]).check_vars(4).is_err());
    }

    #[test]
    fn satisfaction_semantics() {
        let a = Assignment::from_bools(vec![true, false]);
        assert!(Clause::or(&[-1, -2]).is_satisfied_by(&a));
        assert!(Clause::and(&[1, -2]).is_satisfied_by(&a));
        assert!(!Clause::and(&[1, 2]).is_satisfied_by(&a));
    }

    #[test]
    fn bitstrings_round_trip() {
        let a = Assignment::from_mask(5, 0b10110);
        assert_eq!(a.to_bitstring(), "01101");
        assert_eq!(Assignment::from_bitstring("01101"), Some(a));
    }

    #[test]
    fn parameter_validation() {
        assert!(Parameters::new(3, 10, 0.1, 4.0).is_ok());
        assert!(Parameters::new(3, 10, 0.25, 4.0).is_err());
        assert!(Parameters::new(0, 10, 0.1, 4.0).is_err());
        assert!(Parameters::new(3, 10, 0.1, 0.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normalization_is_idempotent(raw in prop::collection::vec((1u32..6, any::<bool>()), 1..8)) {
                let lits: Vec<Literal> = raw.iter().map(|&(v, s)| Literal::new(v, s)).collect();
                if let Some(c) = normalize_clause(lits, ClauseKind::Disjunctive).unwrap() {
                    let again = normalize_clause(c.literals().to_vec(), ClauseKind::Disjunctive).unwrap();
                    prop_assert_eq!(again, Some(c));
                }
            }
        }
    }
}
