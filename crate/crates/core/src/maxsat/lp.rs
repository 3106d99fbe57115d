//! The Max-SAT linear relaxation and a primal simplex specialised to it.
//!
//! ```text
//! max Σ_j z_j
//! s.t. z_j ≤ Σ_{i∈P_j} y_i + Σ_{i∈N_j} (1 − y_i)     for every clause j
//!      0 ≤ y_i ≤ 1, 0 ≤ z_j ≤ 1
//! ```
//!
//! Row `j` is stored as `z_j − Σ_P y_i + Σ_N y_i + s_j = |N_j|` with a slack
//! `s_j ≥ 0`. The columns of `z_j` and `s_j` are both the unit vector `e_j`, so
//! a basis covers each row with at most one of them and the remaining `k`
//! rows are covered by the `k ≤ n` basic `y` columns. Every solve reduces to a
//! dense `k × k` system on the uncovered rows plus back-substitution on the
//! covered ones, so an iteration costs `O(nnz + k³)` instead of `O(m²)`.
//!
//! Pricing is Dantzig's rule; after a run of degenerate pivots it switches to
//! Bland's rule until the objective moves again, which rules out cycling.

use crate::cnf::{Clause, ClauseKind};

use super::MaxSatError;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const ITERATION_CAP: u64 = 1_000_000;
const DEGENERATE_STREAK: u32 = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpRow {
    /// `y` columns of positive literals.
    pub pos: Vec<usize>,
    /// `y` columns of negated literals.
    pub neg: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpModel {
    /// Original variable of each `y` column, increasing.
    pub vars: Vec<u32>,
    pub rows: Vec<LpRow>,
}

impl LpModel {
    pub fn num_y(&self) -> usize {
        self.vars.len()
    }

    pub fn num_z(&self) -> usize {
        self.rows.len()
    }

    /// Largest feasible `z_j` for the given `y` (indexed by column).
    pub fn row_capacity(&self, j: usize, y: &[f64]) -> f64 {
        let r = &self.rows[j];
        r.pos.iter().map(|&i| y[i]).sum::<f64>() + r.neg.iter().map(|&i| 1.0 - y[i]).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub vars: Vec<u32>,
    pub y_star: Vec<f64>,
    pub z_star: Vec<f64>,
    pub objective: f64,
    pub iterations: u64,
}

impl LpSolution {
    /// `y*` indexed by variable `1..=n`; variables outside the model get 1/2.
    pub fn y_by_var(&self, n: usize) -> Vec<f64> {
        let mut y = vec![0.5; n];
        for (col, &v) in self.vars.iter().enumerate() {
            if (v as usize) <= n {
                y[v as usize - 1] = self.y_star[col];
            }
        }
        y
    }
}

/// One `z` per clause and one `y` per variable occurring in `clauses`.
pub fn build_lp(clauses: &[Clause]) -> LpModel {
    debug_assert!(clauses.iter().all(|c| c.kind() == ClauseKind::Disjunctive));
    let mut vars: Vec<u32> = clauses.iter().flat_map(|c| c.literals().iter().map(|l| l.var())).collect();
    vars.sort_unstable();
    vars.dedup();
    let col = |v: u32| vars.binary_search(&v).expect("collected above");
    let rows = clauses
        .iter()
        .map(|c| {
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for l in c.literals() {
                if l.is_negated() {
                    neg.push(col(l.var()));
                } else {
                    pos.push(col(l.var()));
                }
            }
            LpRow { pos, neg }
        })
        .collect();
    LpModel { vars, rows }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Basic,
    Lower,
    Upper,
}

/// Dense LU with partial pivoting for the small uncovered-row system.
struct Lu {
    k: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(k: usize, mut a: Vec<f64>) -> Option<Lu> {
        let mut perm: Vec<usize> = (0..k).collect();
        for c in 0..k {
            let p = (c..k).max_by(|&i, &j| a[i * k + c].abs().total_cmp(&a[j * k + c].abs()))?;
            if a[p * k + c].abs() < 1e-11 {
                return None;
            }
            if p != c {
                for j in 0..k {
                    a.swap(p * k + j, c * k + j);
                }
                perm.swap(p, c);
            }
            let d = a[c * k + c];
            for i in c + 1..k {
                let f = a[i * k + c] / d;
                if f != 0.0 {
                    a[i * k + c] = f;
                    for j in c + 1..k {
                        a[i * k + j] -= f * a[c * k + j];
                    }
                } else {
                    a[i * k + c] = 0.0;
                }
            }
        }
        Some(Lu { k, a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.k;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..k {
            for j in 0..i {
                x[i] -= self.a[i * k + j] * x[j];
            }
        }
        for i in (0..k).rev() {
            for j in i + 1..k {
                x[i] -= self.a[i * k + j] * x[j];
            }
            x[i] /= self.a[i * k + i];
        }
        x
    }

    fn solve_transpose(&self, c: &[f64]) -> Vec<f64> {
        let k = self.k;
        let mut u = c.to_vec();
        for i in 0..k {
            for j in 0..i {
                u[i] -= self.a[j * k + i] * u[j];
            }
            u[i] /= self.a[i * k + i];
        }
        for i in (0..k).rev() {
            for j in i + 1..k {
                u[i] -= self.a[j * k + i] * u[j];
            }
        }
        let mut x = vec![0.0; k];
        for i in 0..k {
            x[self.perm[i]] = u[i];
        }
        x
    }
}

struct Simplex {
    n: usize,
    m: usize,
    ycols: Vec<Vec<(usize, f64)>>,
    b: Vec<f64>,
    status: Vec<Status>,
    x: Vec<f64>,
    tol: f64,
}

/// Basis layout for one iteration.
struct Layout {
    /// Basic unit column covering each row, if any.
    cover: Vec<Option<usize>>,
    basic_y: Vec<usize>,
    /// Position of an uncovered row in the reduced system.
    upos: Vec<usize>,
    uncovered: Vec<usize>,
    lu: Lu,
}

impl Simplex {
    fn new(model: &LpModel, tol: f64) -> Self {
        let n = model.num_y();
        let m = model.num_z();
        let mut ycols = vec![Vec::new(); n];
        let mut b = vec![0.0; m];
        for (j, row) in model.rows.iter().enumerate() {
            for &i in &row.pos {
                ycols[i].push((j, -1.0));
            }
            for &i in &row.neg {
                ycols[i].push((j, 1.0));
            }
            b[j] = row.neg.len() as f64;
        }
        // Start at y = 0. A row with a negated literal has capacity ≥ 1 there,
        // so its z starts at the upper bound; the slack basis stays feasible.
        let mut status = vec![Status::Lower; n + 2 * m];
        let mut x = vec![0.0; n + 2 * m];
        for j in 0..m {
            if b[j] >= 1.0 {
                status[n + j] = Status::Upper;
                x[n + j] = 1.0;
            }
            status[n + m + j] = Status::Basic;
        }
        Simplex { n, m, ycols, b, status, x, tol }
    }

    fn upper(&self, col: usize) -> f64 {
        if col < self.n + self.m {
            1.0
        } else {
            f64::INFINITY
        }
    }

    fn cost(&self, col: usize) -> f64 {
        if col >= self.n && col < self.n + self.m {
            1.0
        } else {
            0.0
        }
    }

    fn row_of_unit(&self, col: usize) -> usize {
        if col < self.n + self.m {
            col - self.n
        } else {
            col - self.n - self.m
        }
    }

    fn layout(&self) -> Result<Layout, MaxSatError> {
        let (n, m) = (self.n, self.m);
        let mut cover = vec![None; m];
        for col in n..n + 2 * m {
            if self.status[col] == Status::Basic {
                let r = self.row_of_unit(col);
                if cover[r].is_some() {
                    return Err(MaxSatError::NumericalFailure("row covered twice".into()));
                }
                cover[r] = Some(col);
            }
        }
        let basic_y: Vec<usize> = (0..n).filter(|&i| self.status[i] == Status::Basic).collect();
        let uncovered: Vec<usize> = (0..m).filter(|&r| cover[r].is_none()).collect();
        if uncovered.len() != basic_y.len() {
            return Err(MaxSatError::NumericalFailure("basis has the wrong size".into()));
        }
        let k = basic_y.len();
        let mut upos = vec![usize::MAX; m];
        for (p, &r) in uncovered.iter().enumerate() {
            upos[r] = p;
        }
        let mut dense = vec![0.0; k * k];
        for (t, &y) in basic_y.iter().enumerate() {
            for &(r, coef) in &self.ycols[y] {
                if upos[r] != usize::MAX {
                    dense[upos[r] * k + t] = coef;
                }
            }
        }
        let lu = Lu::factor(k, dense).ok_or_else(|| MaxSatError::NumericalFailure("singular basis".into()))?;
        Ok(Layout { cover, basic_y, upos, uncovered, lu })
    }

    /// Solves `B w = a` for a right-hand side given densely over rows; returns
    /// `(w_y, w_unit)` with `w_unit` indexed by row.
    fn solve_basis(&self, lay: &Layout, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let rhs: Vec<f64> = lay.uncovered.iter().map(|&r| a[r]).collect();
        let wy = lay.lu.solve(&rhs);
        let mut wu = a.to_vec();
        for (t, &y) in lay.basic_y.iter().enumerate() {
            if wy[t] != 0.0 {
                for &(r, coef) in &self.ycols[y] {
                    wu[r] -= coef * wy[t];
                }
            }
        }
        (wy, wu)
    }

    fn refresh_basic_values(&mut self, lay: &Layout) {
        let mut rhs = self.b.clone();
        for j in 0..self.m {
            if self.status[self.n + j] == Status::Upper {
                rhs[j] -= 1.0;
            }
        }
        for i in 0..self.n {
            if self.status[i] == Status::Upper {
                for &(r, coef) in &self.ycols[i] {
                    rhs[r] -= coef;
                }
            }
        }
        let (wy, wu) = self.solve_basis(lay, &rhs);
        for (t, &y) in lay.basic_y.iter().enumerate() {
            self.x[y] = wy[t];
        }
        for r in 0..self.m {
            if let Some(col) = lay.cover[r] {
                self.x[col] = wu[r];
            }
        }
    }

    fn duals(&self, lay: &Layout) -> Vec<f64> {
        let mut pi = vec![0.0; self.m];
        for r in 0..self.m {
            if let Some(col) = lay.cover[r] {
                pi[r] = self.cost(col);
            }
        }
        let g: Vec<f64> = lay
            .basic_y
            .iter()
            .map(|&y| {
                -self.ycols[y]
                    .iter()
                    .filter(|&&(r, _)| lay.upos[r] == usize::MAX)
                    .map(|&(r, coef)| coef * pi[r])
                    .sum::<f64>()
            })
            .collect();
        let pr = lay.lu.solve_transpose(&g);
        for (p, &r) in lay.uncovered.iter().enumerate() {
            pi[r] = pr[p];
        }
        pi
    }

    fn reduced_cost(&self, col: usize, pi: &[f64]) -> f64 {
        if col < self.n {
            -self.ycols[col].iter().map(|&(r, coef)| coef * pi[r]).sum::<f64>()
        } else {
            self.cost(col) - pi[self.row_of_unit(col)]
        }
    }

    fn column(&self, col: usize) -> Vec<f64> {
        let mut a = vec![0.0; self.m];
        if col < self.n {
            for &(r, coef) in &self.ycols[col] {
                a[r] = coef;
            }
        } else {
            a[self.row_of_unit(col)] = 1.0;
        }
        a
    }

    fn run(&mut self) -> Result<u64, MaxSatError> {
        let total = self.n + 2 * self.m;
        let mut bland = false;
        let mut streak = 0u32;
        for iter in 0..ITERATION_CAP {
            let lay = self.layout()?;
            self.refresh_basic_values(&lay);
            let pi = self.duals(&lay);

            let mut entering: Option<(usize, f64)> = None;
            for col in 0..total {
                let st = self.status[col];
                if st == Status::Basic {
                    continue;
                }
                let d = self.reduced_cost(col, &pi);
                let eligible = (st == Status::Lower && d > self.tol) || (st == Status::Upper && d < -self.tol);
                if !eligible {
                    continue;
                }
                if bland {
                    entering = Some((col, d));
                    break;
                }
                if entering.map_or(true, |(_, best)| d.abs() > best.abs()) {
                    entering = Some((col, d));
                }
            }
            let Some((q, _)) = entering else {
                return Ok(iter);
            };
            let dir = if self.status[q] == Status::Lower { 1.0 } else { -1.0 };

            let (wy, wu) = self.solve_basis(&lay, &self.column(q));
            let mut basics: Vec<(usize, f64)> = lay.basic_y.iter().zip(&wy).map(|(&c, &w)| (c, w)).collect();
            for r in 0..self.m {
                if let Some(col) = lay.cover[r] {
                    basics.push((col, wu[r]));
                }
            }

            let mut theta = self.upper(q);
            let mut leaving: Option<(usize, Status)> = None;
            for (col, w) in basics {
                let rate = -dir * w;
                let (limit, to) = if rate < -self.tol {
                    ((self.x[col]).max(0.0) / -rate, Status::Lower)
                } else if rate > self.tol && self.upper(col).is_finite() {
                    ((self.upper(col) - self.x[col]).max(0.0) / rate, Status::Upper)
                } else {
                    continue;
                };
                // Ties go to the lowest column index.
                let tie = limit <= theta + 1e-12 && leaving.map_or(true, |(lc, _)| col < lc);
                if limit < theta - 1e-12 || tie {
                    theta = theta.min(limit);
                    leaving = Some((col, to));
                }
            }
            if !theta.is_finite() {
                return Err(MaxSatError::NumericalFailure("unbounded direction".into()));
            }

            if theta < 1e-12 {
                streak += 1;
                if streak > DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
                bland = false;
            }

            match leaving {
                Some((col, to)) => {
                    self.status[col] = to;
                    self.x[col] = if to == Status::Upper { self.upper(col) } else { 0.0 };
                    self.status[q] = Status::Basic;
                }
                None => {
                    let flipped = if self.status[q] == Status::Lower { Status::Upper } else { Status::Lower };
                    self.status[q] = flipped;
                    self.x[q] = if flipped == Status::Upper { self.upper(q) } else { 0.0 };
                }
            }
        }
        Err(MaxSatError::NumericalFailure(format!("no convergence in {ITERATION_CAP} iterations")))
    }
}

/// Optimal vertex of the relaxation.
pub fn solve_lp(model: &LpModel, tol: f64) -> Result<LpSolution, MaxSatError> {
    let mut sx = Simplex::new(model, tol);
    let iterations = sx.run()?;
    let lay = sx.layout()?;
    sx.refresh_basic_values(&lay);
    let (n, m) = (sx.n, sx.m);
    let y_star: Vec<f64> = sx.x[..n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let z_star: Vec<f64> = sx.x[n..n + m].iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let objective = z_star.iter().sum();
    Ok(LpSolution { vars: model.vars.clone(), y_star, z_star, objective, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(cl: &[Clause]) -> LpSolution {
        solve_lp(&build_lp(cl), DEFAULT_TOL).unwrap()
    }

    fn assert_feasible(model: &LpModel, sol: &LpSolution) {
        for j in 0..model.num_z() {
            assert!(sol.z_star[j] <= model.row_capacity(j, &sol.y_star) + 1e-7);
        }
    }

    #[test]
    fn model_shapes() {
        let m = build_lp(&[Clause::or(&[1, -2])]);
        assert_eq!(m.vars, vec![1, 2]);
        assert_eq!(m.rows, vec![LpRow { pos: vec![0], neg: vec![1] }]);
        let empty = build_lp(&[]);
        assert_eq!((empty.num_y(), empty.num_z()), (0, 0));
        assert_eq!(solve_lp(&empty, DEFAULT_TOL).unwrap().objective, 0.0);
    }

    #[test]
    fn unit_and_complementary_units() {
        let s = solve(&[Clause::or(&[1])]);
        assert!((s.objective - 1.0).abs() < 1e-9);
        assert!((s.y_star[0] - 1.0).abs() < 1e-9);
        let s = solve(&[Clause::or(&[1]), Clause::or(&[-1])]);
        assert!((s.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_variable_system_has_fractional_optimum() {
        let cl = [Clause::or(&[1, 2]), Clause::or(&[-1, 2]), Clause::or(&[1, -2]), Clause::or(&[-1, -2])];
        let s = solve(&cl);
        assert!((s.objective - 4.0).abs() < 1e-9);
        assert_feasible(&build_lp(&cl), &s);
    }

    #[test]
    fn absent_variables_round_at_one_half() {
        let s = solve(&[Clause::or(&[2])]);
        assert_eq!(s.y_by_var(3), vec![0.5, 1.0, 0.5]);
    }

    #[test]
    fn lu_solves_both_orientations() {
        let a = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let lu = Lu::factor(3, a.clone()).unwrap();
        let x = lu.solve(&[3.0, 2.0, 4.0]);
        for i in 0..3 {
            let got: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum();
            assert!((got - [3.0, 2.0, 4.0][i]).abs() < 1e-12);
        }
        let y = lu.solve_transpose(&[1.0, -1.0, 2.0]);
        for j in 0..3 {
            let got: f64 = (0..3).map(|i| a[i * 3 + j] * y[i]).sum();
            assert!((got - [1.0, -1.0, 2.0][j]).abs() < 1e-12);
        }
    }
}
