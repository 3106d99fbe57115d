//! Dense tableau simplex in exact rational arithmetic, used as an oracle for
//! the floating-point LP solver on small instances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use satstream::cnf::Clause;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Maximizes `c·x` subject to `A x ≤ b`, `x ≥ 0`, with `b ≥ 0`, by Bland's
/// rule from the slack basis. Returns the optimal objective.
pub fn max_le(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> BigRational {
    let rows = a.len();
    let cols = c.len();
    let width = cols + rows + 1;
    let mut t: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r = vec![BigRational::zero(); width];
            r[..cols].clone_from_slice(&a[i]);
            r[cols + i] = BigRational::one();
            r[width - 1] = b[i].clone();
            r
        })
        .collect();
    // Objective row holds reduced costs c_j - z_j; optimal when none positive.
    let mut obj = vec![BigRational::zero(); width];
    obj[..cols].clone_from_slice(c);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    loop {
        let Some(e) = (0..width - 1).find(|&j| obj[j].is_positive()) else {
            return -obj[width - 1].clone();
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][e].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave.expect("bounded LP");
        let piv = t[l][e].clone();
        for v in t[l].iter_mut() {
            *v = &*v / &piv;
        }
        let prow = t[l].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != l && !row[e].is_zero() {
                let f = row[e].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        let f = obj[e].clone();
        for (v, p) in obj.iter_mut().zip(&prow) {
            *v -= &f * p;
        }
        basis[l] = e;
    }
}

/// Optimal value of the Max-SAT relaxation of `clauses` over `x_1..x_n`.
pub fn maxsat_lp_value(clauses: &[Clause], n: usize) -> BigRational {
    let m = clauses.len();
    let cols = n + m;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, c) in clauses.iter().enumerate() {
        let mut row = vec![q(0); cols];
        row[n + j] = q(1);
        let mut negs = 0;
        for l in c.literals() {
            let i = l.var() as usize - 1;
            if l.is_negated() {
                row[i] = q(1);
                negs += 1;
            } else {
                row[i] = q(-1);
            }
        }
        a.push(row);
        b.push(q(negs));
    }
    for col in 0..cols {
        let mut row = vec![q(0); cols];
        row[col] = q(1);
        a.push(row);
        b.push(q(1));
    }
    let mut c = vec![q(0); cols];
    for v in c.iter_mut().skip(n) {
        *v = q(1);
    }
    max_le(&a, &b, &c)
}

pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("finite")
}
