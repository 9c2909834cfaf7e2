//! Dense linear programming: a two-phase primal simplex with Bland's
//! anti-cycling rule, plus a brute-force vertex-enumeration oracle for tiny
//! instances.
//!
//! The distance programs built by the classical module are small, dense and
//! heavily degenerate (many ties at vertices of the Lipschitz polytope), so
//! Bland's rule matters more than pivot speed here. Free variables are split
//! into positive-part pairs before entering the tableau.

use crate::config::SolverConfig;
use thiserror::Error;

/// Feasibility and agreement tolerance used throughout the LP layer.
pub const LP_TOL: f64 = 1e-9;

/// Pivot threshold below which a column entry is treated as zero.
const PIVOT_TOL: f64 = 1e-11;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("program too large for the enumeration oracle: {vars} vars, {rows} constraints (bounds: 8 vars, 24 constraints)")]
    TooLarge { vars: usize, rows: usize },
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    BadConstraint {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("objective has {got} coefficients, expected {expected}")]
    BadObjective { expected: usize, got: usize },
    #[error("program is infeasible")]
    Infeasible,
    #[error("no basic feasible point found within oracle enumeration")]
    NoBasicPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub bound: f64,
}

/// Maximize `objective . x` over free variables subject to the constraints.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub n: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            n,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn push_le(&mut self, coeffs: Vec<f64>, bound: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation: Relation::Le,
            bound,
        });
    }

    pub fn push_eq(&mut self, coeffs: Vec<f64>, bound: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation: Relation::Eq,
            bound,
        });
    }

    /// Adds |coeffs . x| <= bound as the two linear inequalities.
    pub fn push_abs_le(&mut self, coeffs: Vec<f64>, bound: f64) {
        let negated = coeffs.iter().map(|&c| -c).collect();
        self.push_le(coeffs, bound);
        self.push_le(negated, bound);
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.n {
            return Err(LpError::BadObjective {
                expected: self.n,
                got: self.objective.len(),
            });
        }
        for (index, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.n {
                return Err(LpError::BadConstraint {
                    index,
                    expected: self.n,
                    got: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x.iter()).map(|(c, v)| c * v).sum()
    }

    /// Maximum constraint violation at `x` (0 when feasible).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x.iter()).map(|(a, v)| a * v).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.bound,
                Relation::Eq => (lhs - c.bound).abs(),
            };
            worst = worst.max(v);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub optimal_value: f64,
    pub witness: Vec<f64>,
    pub status: LpStatus,
}

/// Dense tableau with an explicit basis; columns are laid out as
/// [split structural vars | slacks | artificials | rhs].
struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let scale = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= scale;
        }
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c];
            if factor == 0.0 {
                continue;
            }
            for j in 0..=self.ncols {
                self.rows[i][j] -= factor * self.rows[r][j];
            }
        }
        let factor = self.obj[c];
        if factor != 0.0 {
            for j in 0..=self.ncols {
                self.obj[j] -= factor * self.rows[r][j];
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// One phase of Bland-rule maximization over the allowed columns.
    /// Returns the terminal status for that phase.
    fn run(&mut self, allowed: &[bool], max_pivots: usize) -> LpStatus {
        loop {
            if self.pivots >= max_pivots {
                return LpStatus::IterationLimit;
            }
            // Bland: entering = lowest-index column with positive reduced cost.
            let mut entering = None;
            for j in 0..self.ncols {
                if allowed[j] && self.obj[j] > LP_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return LpStatus::Optimal;
            };
            // Ratio test; ties go to the smallest basis index (Bland).
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_TOL {
                    let ratio = row[self.ncols] / row[c];
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((best_i, best_ratio)) => {
                            if ratio < best_ratio - PIVOT_TOL
                                || (ratio <= best_ratio + PIVOT_TOL
                                    && self.basis[i] < self.basis[best_i])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = leave else {
                return LpStatus::Unbounded;
            };
            self.pivot(r, c);
        }
    }
}

/// Two-phase primal simplex with Bland's rule. Free variables are split as
/// x = u - v with u, v >= 0; equality rows become opposing inequalities.
pub fn lp_solve(p: &LinearProgram, config: &SolverConfig) -> Result<LpSolution, LpError> {
    p.validate()?;
    let n = p.n;
    // Expand to `A y <= b` over y >= 0 (y = [u; v]).
    let mut rows_a: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut push_row = |coeffs: &[f64], sign: f64, bound: f64| {
        let mut row = Vec::with_capacity(2 * n);
        for &a in coeffs {
            row.push(sign * a);
        }
        for &a in coeffs {
            row.push(-sign * a);
        }
        rows_a.push(row);
        rhs.push(sign * bound);
    };
    for c in &p.constraints {
        match c.relation {
            Relation::Le => push_row(&c.coeffs, 1.0, c.bound),
            Relation::Eq => {
                push_row(&c.coeffs, 1.0, c.bound);
                push_row(&c.coeffs, -1.0, c.bound);
            }
        }
    }
    let m = rows_a.len();
    let nstruct = 2 * n;

    // Rows with negative rhs are flipped and receive an artificial variable.
    let mut needs_artificial = Vec::new();
    for i in 0..m {
        if rhs[i] < 0.0 {
            for v in rows_a[i].iter_mut() {
                *v = -*v;
            }
            rhs[i] = -rhs[i];
            needs_artificial.push(i);
        }
    }
    let nart = needs_artificial.len();
    let ncols = nstruct + m + nart;

    let mut rows = vec![vec![0.0; ncols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut art_col_of_row = vec![usize::MAX; m];
    for (k, &i) in needs_artificial.iter().enumerate() {
        art_col_of_row[i] = nstruct + m + k;
    }
    for i in 0..m {
        rows[i][..nstruct].copy_from_slice(&rows_a[i]);
        // slack: +1 for untouched rows, -1 (surplus) for flipped rows
        rows[i][nstruct + i] = if art_col_of_row[i] == usize::MAX {
            1.0
        } else {
            -1.0
        };
        rows[i][ncols] = rhs[i];
        if art_col_of_row[i] == usize::MAX {
            basis[i] = nstruct + i;
        } else {
            rows[i][art_col_of_row[i]] = 1.0;
            basis[i] = art_col_of_row[i];
        }
    }

    let mut t = Tableau {
        rows,
        obj: vec![0.0; ncols + 1],
        basis,
        ncols,
        pivots: 0,
    };

    // Phase I: maximize -sum(artificials).
    if nart > 0 {
        for k in 0..nart {
            t.obj[nstruct + m + k] = -1.0;
        }
        // Price out the basic artificials.
        for i in 0..m {
            if art_col_of_row[i] != usize::MAX {
                for j in 0..=ncols {
                    t.obj[j] += t.rows[i][j];
                }
            }
        }
        let allowed = vec![true; ncols];
        let status = t.run(&allowed, config.max_pivots);
        if status == LpStatus::IterationLimit {
            return Ok(LpSolution {
                optimal_value: 0.0,
                witness: vec![0.0; n],
                status,
            });
        }
        // Phase I optimum is -(infeasibility); obj[ncols] holds -value.
        if t.obj[ncols].abs() > 1e-7 {
            return Err(LpError::Infeasible);
        }
        // Pivot any artificial still sitting in the basis out of it.
        for i in 0..m {
            if t.basis[i] >= nstruct + m {
                if let Some(c) = (0..nstruct + m).find(|&j| t.rows[i][j].abs() > PIVOT_TOL) {
                    t.pivot(i, c);
                }
            }
        }
    }

    // Phase II objective: maximize c.(u - v).
    t.obj = vec![0.0; ncols + 1];
    for j in 0..n {
        t.obj[j] = p.objective[j];
        t.obj[n + j] = -p.objective[j];
    }
    for i in 0..m {
        let b = t.basis[i];
        let factor = t.obj[b];
        if factor != 0.0 {
            for j in 0..=ncols {
                t.obj[j] -= factor * t.rows[i][j];
            }
        }
    }
    let mut allowed = vec![true; ncols];
    for j in (nstruct + m)..ncols {
        allowed[j] = false;
    }
    let status = t.run(&allowed, config.max_pivots);

    let mut y = vec![0.0; ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < ncols {
            y[b] = t.rows[i][t.ncols];
        }
    }
    let witness: Vec<f64> = (0..n).map(|j| y[j] - y[n + j]).collect();
    Ok(LpSolution {
        optimal_value: p.objective_value(&witness),
        witness,
        status: if status == LpStatus::Unbounded {
            LpStatus::Unbounded
        } else {
            status
        },
    })
}

/// Upper bound on instance size accepted by [`lp_oracle`].
pub const ORACLE_MAX_VARS: usize = 8;
pub const ORACLE_MAX_ROWS: usize = 24;

/// Independent correctness oracle: enumerates every n-subset of constraints,
/// solves the active-set linear system, filters by feasibility and returns
/// the best objective. Exact up to linear-solve roundoff.
pub fn lp_oracle(p: &LinearProgram) -> Result<f64, LpError> {
    p.validate()?;
    let n = p.n;
    let m = p.constraints.len();
    if n > ORACLE_MAX_VARS || m > ORACLE_MAX_ROWS {
        return Err(LpError::TooLarge { vars: n, rows: m });
    }
    if m < n {
        return Err(LpError::NoBasicPoint);
    }

    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = solve_active_set(p, &idx) {
            if p.violation(&x) <= LP_TOL {
                let val = p.objective_value(&x);
                best = Some(best.map_or(val, |b: f64| b.max(val)));
            }
        }
        // next combination in lexicographic order
        let mut k = n;
        loop {
            if k == 0 {
                return best.ok_or(LpError::NoBasicPoint);
            }
            k -= 1;
            if idx[k] != k + m - n {
                idx[k] += 1;
                for j in (k + 1)..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Solves the n x n system given by the selected constraints as equalities.
/// Returns None when the active set is singular.
fn solve_active_set(p: &LinearProgram, rows: &[usize]) -> Option<Vec<f64>> {
    let n = p.n;
    let mut a = vec![vec![0.0; n + 1]; n];
    for (i, &r) in rows.iter().enumerate() {
        a[i][..n].copy_from_slice(&p.constraints[r].coeffs);
        a[i][n] = p.constraints[r].bound;
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() <= 1e-10 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..=n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(p: &LinearProgram) -> LpSolution {
        lp_solve(p, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn one_dimensional() {
        let mut p = LinearProgram::new(vec![1.0]);
        p.push_le(vec![1.0], 3.0);
        p.push_le(vec![-1.0], 0.0);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimal_value - 3.0).abs() <= LP_TOL);
        assert!((s.witness[0] - 3.0).abs() <= LP_TOL);
        assert!((lp_oracle(&p).unwrap() - 3.0).abs() <= LP_TOL);
    }

    #[test]
    fn two_dimensional() {
        let mut p = LinearProgram::new(vec![1.0, 1.0]);
        p.push_le(vec![1.0, 0.0], 1.0);
        p.push_le(vec![0.0, 1.0], 1.0);
        p.push_le(vec![1.0, 1.0], 1.5);
        let s = solve(&p);
        assert!((s.optimal_value - 1.5).abs() <= LP_TOL);
        assert!(p.violation(&s.witness) <= LP_TOL);
    }

    #[test]
    fn two_point_lipschitz_polytope() {
        // max f1 - f2 with |f1|,|f2| <= 1 and |f1 - f2| <= 1
        let mut p = LinearProgram::new(vec![1.0, -1.0]);
        p.push_abs_le(vec![1.0, 0.0], 1.0);
        p.push_abs_le(vec![0.0, 1.0], 1.0);
        p.push_abs_le(vec![1.0, -1.0], 1.0);
        let s = solve(&p);
        assert!((s.optimal_value - 1.0).abs() <= LP_TOL);
        assert!((lp_oracle(&p).unwrap() - 1.0).abs() <= LP_TOL);
    }

    #[test]
    fn unbounded_detected() {
        let mut p = LinearProgram::new(vec![1.0]);
        p.push_le(vec![-1.0], 0.0);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_negative_bound() {
        // max x + y subject to x + y = 1, x - y <= -0.5 (forces phase I)
        let mut p = LinearProgram::new(vec![1.0, 1.0]);
        p.push_eq(vec![1.0, 1.0], 1.0);
        p.push_le(vec![1.0, -1.0], -0.5);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimal_value - 1.0).abs() <= LP_TOL);
        assert!(p.violation(&s.witness) <= LP_TOL);
    }

    #[test]
    fn infeasible_detected() {
        let mut p = LinearProgram::new(vec![1.0]);
        p.push_le(vec![1.0], -1.0);
        p.push_le(vec![-1.0], 0.0);
        assert!(matches!(
            lp_solve(&p, &SolverConfig::default()),
            Err(LpError::Infeasible)
        ));
    }

    #[test]
    fn duplicated_constraints_harmless() {
        let mut p = LinearProgram::new(vec![1.0, 2.0]);
        p.push_le(vec![1.0, 0.0], 2.0);
        p.push_le(vec![0.0, 1.0], 1.0);
        let base = lp_oracle(&p).unwrap();
        p.push_le(vec![1.0, 0.0], 2.0);
        p.push_le(vec![0.0, 1.0], 1.0);
        let dup = lp_oracle(&p).unwrap();
        assert!((base - dup).abs() <= LP_TOL);
        assert!((solve(&p).optimal_value - base).abs() <= LP_TOL);
    }

    #[test]
    fn oracle_bounds_enforced() {
        let p = LinearProgram::new(vec![0.0; 9]);
        assert!(matches!(lp_oracle(&p), Err(LpError::TooLarge { .. })));
    }

    #[test]
    fn objective_rescaling_is_exact() {
        let mut p = LinearProgram::new(vec![1.0, -0.5, 0.25]);
        p.push_abs_le(vec![1.0, 0.0, 0.0], 1.0);
        p.push_abs_le(vec![0.0, 1.0, 0.0], 2.0);
        p.push_abs_le(vec![0.0, 0.0, 1.0], 0.5);
        p.push_abs_le(vec![1.0, -1.0, 0.0], 1.5);
        let base = solve(&p).optimal_value;
        for t in [0.25, 3.0, 17.5] {
            let mut scaled = p.clone();
            for c in scaled.objective.iter_mut() {
                *c *= t;
            }
            let val = solve(&scaled).optimal_value;
            assert!(
                (val - t * base).abs() <= 1e-12 * (1.0 + (t * base).abs()),
                "scaling by {t}: {val} vs {}",
                t * base
            );
        }
    }

    #[test]
    fn redundant_constraint_no_change() {
        let mut p = LinearProgram::new(vec![1.0, 1.0]);
        p.push_le(vec![1.0, 0.0], 1.0);
        p.push_le(vec![0.0, 1.0], 1.0);
        let base = solve(&p).optimal_value;
        // implied by the two bounds above
        p.push_le(vec![1.0, 1.0], 2.0);
        let with_redundant = solve(&p).optimal_value;
        assert!((base - with_redundant).abs() <= LP_TOL);
    }
}
