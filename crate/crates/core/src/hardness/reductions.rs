use crate::cnf::{Clause, Literal};

use super::maxand::and_patterns;
use super::{sk_clause, HardnessConfig, HardnessError, IndexInstance};

/// Variable `x_{a,b}` of the k-SAT reduction (0-based block `a`, 0-based
/// member `b`, blocks of size `n/k`).
pub fn ksat_var(a: usize, b: usize, block: usize) -> u32 {
    (a * block + b + 1) as u32
}

/// Alice's clause `(x_{1,j1} ∨ … ∨ x_{k,jk})` for every `j` with `A_j = 1`,
/// then Bob's `2^k - 1` clauses over `x_{1,i1}, …, x_{k,ik}`: every sign
/// pattern except all-positive. Satisfiable iff `A_i = 0`.
pub fn gen_ksat_index(inst: &IndexInstance, cfg: &HardnessConfig) -> Result<Vec<Clause>, HardnessError> {
    cfg.validate_ksat()?;
    inst.validate()?;
    let block = cfg.n / cfg.k;
    if inst.dims != vec![block; cfg.k] {
        return Err(HardnessError::DimensionMismatch {
            expected: format!("dims {:?}", vec![block; cfg.k]),
            got: format!("dims {:?}", inst.dims),
        });
    }
    let mut out = Vec::new();
    for (pos, _) in inst.bits.iter().enumerate().filter(|(_, &b)| b) {
        let vars: Vec<u32> = inst.coords(pos).iter().enumerate().map(|(a, &j)| ksat_var(a, j, block)).collect();
        out.push(sk_clause(&vars, 0));
    }
    let vars: Vec<u32> = inst.index.iter().enumerate().map(|(a, &i)| ksat_var(a, i, block)).collect();
    out.extend((1..1u32 << cfg.k).map(|mask| sk_clause(&vars, mask)));
    Ok(out)
}

/// `C_1` has `x_j` where `A_j = 1` and `¬x_j` where `A_j = 0`; `C_2 = (x_i)`.
/// The Min-SAT optimum is positive iff `A_i = 0`.
pub fn gen_minsat_index(inst: &IndexInstance) -> Result<Vec<Clause>, HardnessError> {
    inst.validate()?;
    if inst.dims.len() != 1 {
        return Err(HardnessError::DimensionMismatch { expected: "a scalar index".into(), got: format!("dims {:?}", inst.dims) });
    }
    let c1: Vec<i64> = inst.bits.iter().enumerate().map(|(j, &b)| if b { j as i64 + 1 } else { -(j as i64 + 1) }).collect();
    Ok(vec![Clause::or(&c1), Clause::or(&[inst.index[0] as i64 + 1])])
}

/// Variables `x_1..x_n` carry Alice's rows; `z_1..z_T` are variables
/// `n+1..n+T` and carry the shared system. Alice's `D_k` fixes every `x_j`
/// to `A_{k,j}` and appends `C_k`; Bob's `D_B = x_{i2} ∧ C_{i1}`. Whenever
/// the system is pairwise exclusive, the Max-AND optimum is `1 + A_{i1,i2}`.
pub fn gen_maxand_index(inst: &IndexInstance, cfg: &HardnessConfig) -> Result<Vec<Clause>, HardnessError> {
    cfg.validate_maxand()?;
    inst.validate()?;
    if inst.dims != [cfg.m, cfg.n] {
        return Err(HardnessError::DimensionMismatch {
            expected: format!("dims [{}, {}]", cfg.m, cfg.n),
            got: format!("dims {:?}", inst.dims),
        });
    }
    let n = cfg.n;
    let patterns = and_patterns(cfg.m, cfg.t, cfg.seed);
    let z = |pat: &[bool]| -> Vec<Literal> {
        pat.iter().enumerate().map(|(t, &neg)| Literal::new((n + t + 1) as u32, neg)).collect()
    };
    let mut out = Vec::with_capacity(cfg.m + 1);
    for (k, pat) in patterns.iter().enumerate() {
        let mut lits: Vec<Literal> = (0..n).map(|j| Literal::new(j as u32 + 1, !inst.bits[k * n + j])).collect();
        lits.extend(z(pat));
        out.push(conj(lits)?);
    }
    let (i1, i2) = (inst.index[0], inst.index[1]);
    let mut bob = vec![Literal::pos(i2 as u32 + 1)];
    bob.extend(z(&patterns[i1]));
    out.push(conj(bob)?);
    Ok(out)
}

fn conj(lits: Vec<Literal>) -> Result<Clause, HardnessError> {
    Ok(crate::cnf::normalize_clause(lits, crate::cnf::ClauseKind::Conjunctive)?.expect("conjunctions are kept"))
}
