//! Exact two-phase simplex over arbitrary-precision rationals.
//!
//! Bland's pivot rule throughout, so the solver terminates on every input.
//! Variables are nonnegative by default; free variables are split into a
//! difference of two nonnegative ones during standard-form conversion.

use super::Rat;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

/// A minimization problem with exact rational coefficients.
#[derive(Debug, Clone)]
pub struct LpProblem {
    num_vars: usize,
    objective: Vec<Rat>,
    constraints: Vec<Constraint>,
    free: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LpProblem {
    /// A problem over `num_vars` variables, all constrained to be >= 0.
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: vec![Rat::zero(); num_vars],
            constraints: Vec::new(),
            free: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Minimize `coeffs . x`.
    pub fn set_objective(&mut self, coeffs: Vec<Rat>) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.objective = coeffs;
    }

    pub fn objective_coeff(&mut self, var: usize, coeff: Rat) {
        self.objective[var] = coeff;
    }

    /// Drops the implicit `x >= 0` bound on `var`.
    pub fn make_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Exact feasibility check of a candidate point, used by tests and by
    /// the optimality invariants.
    pub fn is_feasible(&self, point: &[Rat]) -> bool {
        if point.len() != self.num_vars {
            return false;
        }
        for (j, x) in point.iter().enumerate() {
            if !self.free[j] && x < &Rat::zero() {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs: Rat = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
            match c.rel {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }

    pub fn objective_at(&self, point: &[Rat]) -> Rat {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }
}

/// Solves the problem exactly. `Optimal` points satisfy every constraint
/// with exact (in)equality and the value equals the objective at the point.
pub fn solve_lp(p: &LpProblem) -> LpOutcome {
    Tableau::from_problem(p).solve(p)
}

struct Tableau {
    /// Row-major matrix, one extra column for the right-hand side.
    rows: Vec<Vec<Rat>>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    /// Reduced-cost row; entry `total_cols` holds minus the objective value.
    obj: Vec<Rat>,
    total_cols: usize,
    /// Column index of each original variable's positive part, and of the
    /// negative part for free variables.
    pos_col: Vec<usize>,
    neg_col: Vec<Option<usize>>,
    artificial_start: usize,
}

impl Tableau {
    fn from_problem(p: &LpProblem) -> Tableau {
        let mut pos_col = Vec::with_capacity(p.num_vars);
        let mut neg_col = Vec::with_capacity(p.num_vars);
        let mut next = 0usize;
        for j in 0..p.num_vars {
            pos_col.push(next);
            next += 1;
            if p.free[j] {
                neg_col.push(Some(next));
                next += 1;
            } else {
                neg_col.push(None);
            }
        }
        let num_slacks = p
            .constraints
            .iter()
            .filter(|c| c.rel != Relation::Eq)
            .count();
        let structural = next + num_slacks;
        let m = p.constraints.len();
        let total_cols = structural + m; // one artificial per row
        let mut rows = vec![vec![Rat::zero(); total_cols + 1]; m];
        let mut slack = next;
        for (i, c) in p.constraints.iter().enumerate() {
            for (j, a) in c.coeffs.iter().enumerate() {
                rows[i][pos_col[j]] = a.clone();
                if let Some(nc) = neg_col[j] {
                    rows[i][nc] = -a.clone();
                }
            }
            match c.rel {
                Relation::Le => {
                    rows[i][slack] = Rat::one();
                    slack += 1;
                }
                Relation::Ge => {
                    rows[i][slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            rows[i][total_cols] = c.rhs.clone();
            if rows[i][total_cols] < Rat::zero() {
                for x in rows[i].iter_mut() {
                    *x = -x.clone();
                }
            }
            rows[i][structural + i] = Rat::one();
        }
        let basis: Vec<usize> = (0..m).map(|i| structural + i).collect();
        Tableau {
            rows,
            basis,
            obj: vec![Rat::zero(); total_cols + 1],
            total_cols,
            pos_col,
            neg_col,
            artificial_start: structural,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let lead = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x /= &lead;
        }
        for r in 0..self.rows.len() {
            if r != row && !self.rows[r][col].is_zero() {
                let factor = self.rows[r][col].clone();
                for c in 0..=self.total_cols {
                    let sub = &factor * &self.rows[row][c];
                    self.rows[r][c] -= sub;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for c in 0..=self.total_cols {
                let sub = &factor * &self.rows[row][c];
                self.obj[c] -= sub;
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations with Bland's rule until optimal or unbounded.
    /// `allowed` limits the entering columns (artificials are barred from
    /// re-entering in phase 2). Returns `false` on unboundedness.
    fn iterate(&mut self, allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| self.obj[j] < Rat::zero());
            let col = match entering {
                Some(c) => c,
                None => return true,
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col] > Rat::zero() {
                    let better = match leave {
                        None => true,
                        Some(lr) => {
                            let cur = &self.rows[lr][self.total_cols] / &self.rows[lr][col];
                            let cand = &self.rows[r][self.total_cols] / &self.rows[r][col];
                            cand < cur || (cand == cur && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some(r);
                    }
                }
            }
            match leave {
                Some(r) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn price_out_basis(&mut self) {
        for r in 0..self.rows.len() {
            let col = self.basis[r];
            if !self.obj[col].is_zero() {
                let factor = self.obj[col].clone();
                for c in 0..=self.total_cols {
                    let sub = &factor * &self.rows[r][c];
                    self.obj[c] -= sub;
                }
            }
        }
    }

    fn solve(mut self, p: &LpProblem) -> LpOutcome {
        // Phase 1: minimize the sum of artificials.
        self.obj = vec![Rat::zero(); self.total_cols + 1];
        for j in self.artificial_start..self.total_cols {
            self.obj[j] = Rat::one();
        }
        self.price_out_basis();
        let bounded = self.iterate(self.total_cols);
        debug_assert!(bounded, "phase-1 objective is bounded below by zero");
        if -self.obj[self.total_cols].clone() > Rat::zero() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis; a row with no
        // structural entry is redundant and can stay (its rhs is zero).
        for r in 0..self.rows.len() {
            if self.basis[r] >= self.artificial_start {
                if let Some(col) =
                    (0..self.artificial_start).find(|&c| !self.rows[r][c].is_zero())
                {
                    self.pivot(r, col);
                }
            }
        }
        // Phase 2: original objective, artificials barred.
        self.obj = vec![Rat::zero(); self.total_cols + 1];
        for j in 0..p.num_vars {
            self.obj[self.pos_col[j]] = p.objective[j].clone();
            if let Some(nc) = self.neg_col[j] {
                self.obj[nc] = -p.objective[j].clone();
            }
        }
        self.price_out_basis();
        if !self.iterate(self.artificial_start) {
            return LpOutcome::Unbounded;
        }
        let mut raw = vec![Rat::zero(); self.total_cols];
        for (r, &b) in self.basis.iter().enumerate() {
            raw[b] = self.rows[r][self.total_cols].clone();
        }
        let point: Vec<Rat> = (0..p.num_vars)
            .map(|j| {
                let mut x = raw[self.pos_col[j]].clone();
                if let Some(nc) = self.neg_col[j] {
                    x -= &raw[nc];
                }
                x
            })
            .collect();
        let value = p.objective_at(&point);
        debug_assert!(p.is_feasible(&point));
        LpOutcome::Optimal { value, point }
    }
}
