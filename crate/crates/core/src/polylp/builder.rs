use super::simplex::{solve_lp, LpError, LpOutcome, LpProblem, LpStatus};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// Row-wise LP assembly. Inequality rows receive a slack column appended
/// after the user variables; solutions are reported for user variables only.
#[derive(Clone, Debug, Default)]
pub struct LpBuilder {
    cost: Vec<f64>,
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
    rows: Vec<(Vec<(usize, f64)>, Relation, f64)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, lower: Option<f64>, upper: Option<f64>, cost: f64) -> usize {
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.cost.len() - 1
    }

    /// Adds `count` variables sharing bounds and cost; returns the first index.
    pub fn add_vars(
        &mut self,
        count: usize,
        lower: Option<f64>,
        upper: Option<f64>,
        cost: f64,
    ) -> usize {
        let first = self.cost.len();
        for _ in 0..count {
            self.add_var(lower, upper, cost);
        }
        first
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<f64>, upper: Option<f64>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, rel: Relation, rhs: f64) {
        self.rows.push((terms, rel, rhs));
    }

    pub fn to_problem(&self) -> LpProblem {
        let n_user = self.cost.len();
        let n_slack = self
            .rows
            .iter()
            .filter(|r| r.1 != Relation::Eq)
            .count();
        let n = n_user + n_slack;
        let mut lhs = Matrix::zeros(self.rows.len(), n);
        let mut rhs = Vec::with_capacity(self.rows.len());
        let mut cost = self.cost.clone();
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        let mut slack = n_user;
        for (i, (terms, rel, b)) in self.rows.iter().enumerate() {
            for &(j, a) in terms {
                lhs[(i, j)] += a;
            }
            match rel {
                Relation::Eq => {}
                Relation::Le | Relation::Ge => {
                    lhs[(i, slack)] = if *rel == Relation::Le { 1.0 } else { -1.0 };
                    slack += 1;
                    cost.push(0.0);
                    lower.push(Some(0.0));
                    upper.push(None);
                }
            }
            rhs.push(*b);
        }
        LpProblem {
            objective: cost,
            eq_lhs: lhs,
            eq_rhs: rhs,
            lower,
            upper,
        }
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        let mut out = solve_lp(&self.to_problem())?;
        if out.status == LpStatus::Optimal {
            out.primal.truncate(self.cost.len());
        }
        Ok(out)
    }
}
