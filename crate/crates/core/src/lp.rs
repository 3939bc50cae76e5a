//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems are `minimize cᵀx` subject to linear rows (`≤`, `≥`, `=`) and
//! `x ≥ 0`. Sizes here are tiny (tens of rows), so the tableau is dense and
//! reduced costs are recomputed every iteration.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Minimized.
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Phase-one optimum above this means infeasible.
    pub feasibility_tol: f64,
    /// Smallest admissible pivot magnitude and reduced-cost threshold.
    pub pivot_tol: f64,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-9,
            pivot_tol: 1e-12,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    /// Smallest total artificial infeasibility found by phase one.
    Infeasible { phase_one_optimum: f64 },
    Unbounded,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("simplex exceeded {0} iterations")]
    IterationLimit(usize),
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    Shape { row: usize, expected: usize, got: usize },
    #[error("non-finite data in constraint {0}")]
    NonFinite(usize),
}

struct Tableau {
    /// Each row holds the column coefficients followed by the right-hand side.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    fn objective(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .map(|(r, &b)| cost[b] * self.rhs(r))
            .sum()
    }

    /// Minimizes `cost` over the current basis, only letting columns with
    /// `allowed(j)` enter.
    fn optimize(
        &mut self,
        cost: &[f64],
        allowed: &dyn Fn(usize) -> bool,
        opts: &SimplexOptions,
        iterations: &mut usize,
    ) -> Result<PhaseEnd, LpError> {
        loop {
            if *iterations >= opts.max_iterations {
                return Err(LpError::IterationLimit(opts.max_iterations));
            }
            *iterations += 1;
            // Bland: lowest-index column with negative reduced cost enters
            let entering = (0..self.cols).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .enumerate()
                        .map(|(r, &b)| cost[b] * self.rows[r][j])
                        .sum::<f64>();
                reduced < -opts.pivot_tol
            });
            let Some(c) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            // ratio test, ties to the lowest basic index
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][c];
                if a <= opts.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leaving = match leaving {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        let tie = (ratio - best_ratio).abs() <= 1e-12 * best_ratio.abs().max(1.0);
                        if ratio < best_ratio && !tie
                            || tie && self.basis[r] < self.basis[best]
                        {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            match leaving {
                None => return Ok(PhaseEnd::Unbounded),
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

pub fn solve(lp: &LinearProgram, opts: &SimplexOptions) -> Result<LpOutcome, LpError> {
    let n = lp.num_vars;
    for (row, con) in lp.constraints.iter().enumerate() {
        if con.coeffs.len() != n {
            return Err(LpError::Shape {
                row,
                expected: n,
                got: con.coeffs.len(),
            });
        }
        if !con.rhs.is_finite() || con.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite(row));
        }
    }

    // normalize to nonnegative right-hand sides
    let normalized: Vec<(Vec<f64>, Relation, f64)> = lp
        .constraints
        .iter()
        .map(|con| {
            if con.rhs < 0.0 {
                let flipped = match con.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (con.coeffs.iter().map(|v| -v).collect(), flipped, -con.rhs)
            } else {
                (con.coeffs.clone(), con.relation, con.rhs)
            }
        })
        .collect();

    let m = normalized.len();
    let slack_count = normalized
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Eq)
        .count();
    let artificial_count = normalized
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Le)
        .count();
    let first_artificial = n + slack_count;
    let cols = first_artificial + artificial_count;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_artificial) = (n, first_artificial);
    for (coeffs, relation, rhs) in &normalized {
        let mut row = vec![0.0; cols + 1];
        row[..n].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match relation {
            Relation::Le => {
                row[next_slack] = 1.0;
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_artificial] = 1.0;
                basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = 1.0;
                basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, cols };
    let mut iterations = 0;

    if artificial_count > 0 {
        let mut phase_one_cost = vec![0.0; cols];
        phase_one_cost[first_artificial..].iter_mut().for_each(|c| *c = 1.0);
        tab.optimize(&phase_one_cost, &|_| true, opts, &mut iterations)?;
        let infeasibility = tab.objective(&phase_one_cost);
        if infeasibility > opts.feasibility_tol {
            return Ok(LpOutcome::Infeasible {
                phase_one_optimum: infeasibility,
            });
        }
        // drive remaining artificials out of the basis; drop redundant rows
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= first_artificial {
                let replacement =
                    (0..first_artificial).find(|&j| tab.rows[r][j].abs() > opts.pivot_tol);
                match replacement {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(&lp.objective);
    let end = tab.optimize(&cost, &|j| j < first_artificial, opts, &mut iterations)?;
    if let PhaseEnd::Unbounded = end {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(r).max(0.0);
        }
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, objective })
}
