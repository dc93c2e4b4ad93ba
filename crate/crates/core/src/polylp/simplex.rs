//! Bounded-variable revised simplex, two phases, Bland's rule.
//!
//! The basis matrix is refactored from scratch at every iteration. Problems
//! here have a few dozen rows at most, so this keeps the code short and the
//! arithmetic reproducible without any update bookkeeping.

use crate::linalg::{Lu, Matrix};

const FEAS_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-10;
const LU_PIVOT_TOL: f64 = 1e-13;

/// `min objectiveᵀ x` subject to `eq_lhs x = eq_rhs` and per-variable bounds
/// (`None` means unbounded in that direction).
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub eq_lhs: Matrix,
    pub eq_rhs: Vec<f64>,
    pub lower: Vec<Option<f64>>,
    pub upper: Vec<Option<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve_lp`]. `primal` and `dual` are meaningful only when the
/// status is [`LpStatus::Optimal`]; `dual` holds one multiplier per equality
/// row with `objective - eq_lhsᵀ dual` equal to the reduced costs.
#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("LP dimensions disagree: {0}")]
    Dimension(String),
    #[error("variable {var} has lower bound {lower} above upper bound {upper}")]
    CrossedBounds { var: usize, lower: f64, upper: f64 },
    #[error("LP data contains a non-finite number")]
    NonFinite,
    #[error("simplex hit the iteration cap of {0}")]
    IterationLimit(usize),
    #[error("basis matrix became numerically singular")]
    SingularBasis,
    #[error("LP expected to have an optimum ended {0:?}")]
    UnexpectedStatus(LpStatus),
}

// How a user variable maps onto nonnegative internal columns.
#[derive(Clone, Copy, Debug)]
enum Column {
    Shifted { col: usize, lower: f64 },
    Mirrored { col: usize, upper: f64 },
    Split { pos: usize, neg: usize },
}

struct Standard {
    // column-major constraint matrix, rows sign-flipped so rhs >= 0
    cols: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    upper: Vec<f64>,
    row_sign: Vec<f64>,
    map: Vec<Column>,
    n_structural: usize,
}

pub fn solve_lp(p: &LpProblem) -> Result<LpOutcome, LpError> {
    let n = p.objective.len();
    let m = p.eq_rhs.len();
    if p.eq_lhs.rows() != m || p.eq_lhs.cols() != n || p.lower.len() != n || p.upper.len() != n
    {
        return Err(LpError::Dimension(format!(
            "{} costs, {}x{} matrix, {} rhs, {}/{} bounds",
            n,
            p.eq_lhs.rows(),
            p.eq_lhs.cols(),
            m,
            p.lower.len(),
            p.upper.len()
        )));
    }
    let finite = p.objective.iter().chain(&p.eq_rhs).all(|x| x.is_finite())
        && p.eq_lhs.as_slice().iter().all(|x| x.is_finite())
        && p.lower.iter().chain(&p.upper).flatten().all(|x| !x.is_nan());
    if !finite {
        return Err(LpError::NonFinite);
    }

    let std = standardize(p)?;
    let mut solver = Simplex::new(&std);
    let iteration_cap = 20_000 + 200 * (m + std.n_structural);

    // Phase 1: drive the artificial variables to zero.
    let phase1_cost: Vec<f64> = (0..solver.n_total)
        .map(|j| if j >= std.n_structural { 1.0 } else { 0.0 })
        .collect();
    solver.run(&phase1_cost, true, iteration_cap)?;
    let infeasibility: f64 = (std.n_structural..solver.n_total)
        .map(|j| solver.value_of(j))
        .sum();
    let rhs_scale = 1.0 + std.rhs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if infeasibility > FEAS_TOL * rhs_scale {
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            value: f64::NAN,
            primal: Vec::new(),
            dual: Vec::new(),
        });
    }

    // Phase 2: artificials are pinned at zero and may not re-enter.
    for j in std.n_structural..solver.n_total {
        solver.upper[j] = 0.0;
    }
    let mut phase2_cost = std.cost.clone();
    phase2_cost.resize(solver.n_total, 0.0);
    if !solver.run(&phase2_cost, false, iteration_cap)? {
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            value: f64::NEG_INFINITY,
            primal: Vec::new(),
            dual: Vec::new(),
        });
    }

    let internal: Vec<f64> = (0..std.n_structural).map(|j| solver.value_of(j)).collect();
    let primal: Vec<f64> = std
        .map
        .iter()
        .map(|c| match *c {
            Column::Shifted { col, lower } => lower + internal[col],
            Column::Mirrored { col, upper } => upper - internal[col],
            Column::Split { pos, neg } => internal[pos] - internal[neg],
        })
        .collect();
    let value = p
        .objective
        .iter()
        .zip(&primal)
        .map(|(c, x)| c * x)
        .sum();
    let pi = solver.duals(&phase2_cost)?;
    let dual = pi.iter().zip(&std.row_sign).map(|(y, s)| y * s).collect();
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        value,
        primal,
        dual,
    })
}

fn standardize(p: &LpProblem) -> Result<Standard, LpError> {
    let m = p.eq_rhs.len();
    let mut map = Vec::with_capacity(p.objective.len());
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut cost = Vec::new();
    let mut upper = Vec::new();
    let mut rhs = p.eq_rhs.clone();

    for j in 0..p.objective.len() {
        let a = p.eq_lhs.col(j);
        let c = p.objective[j];
        let lo = p.lower[j].filter(|x| x.is_finite());
        let hi = p.upper[j].filter(|x| x.is_finite());
        match (lo, hi) {
            (Some(l), h) => {
                if let Some(h) = h {
                    if h < l {
                        return Err(LpError::CrossedBounds {
                            var: j,
                            lower: l,
                            upper: h,
                        });
                    }
                }
                for (r, ai) in rhs.iter_mut().zip(&a) {
                    *r -= ai * l;
                }
                map.push(Column::Shifted {
                    col: cols.len(),
                    lower: l,
                });
                cols.push(a);
                cost.push(c);
                upper.push(h.map_or(f64::INFINITY, |h| h - l));
            }
            (None, Some(h)) => {
                for (r, ai) in rhs.iter_mut().zip(&a) {
                    *r -= ai * h;
                }
                map.push(Column::Mirrored {
                    col: cols.len(),
                    upper: h,
                });
                cols.push(a.iter().map(|x| -x).collect());
                cost.push(-c);
                upper.push(f64::INFINITY);
            }
            (None, None) => {
                let pos = cols.len();
                map.push(Column::Split { pos, neg: pos + 1 });
                cols.push(a.clone());
                cols.push(a.iter().map(|x| -x).collect());
                cost.push(c);
                cost.push(-c);
                upper.push(f64::INFINITY);
                upper.push(f64::INFINITY);
            }
        }
    }

    let row_sign: Vec<f64> = rhs
        .iter()
        .map(|&r| if r < 0.0 { -1.0 } else { 1.0 })
        .collect();
    for col in cols.iter_mut() {
        for (x, s) in col.iter_mut().zip(&row_sign) {
            *x *= s;
        }
    }
    for (r, s) in rhs.iter_mut().zip(&row_sign) {
        *r *= s;
    }
    let n_structural = cols.len();
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        cols.push(e);
        upper.push(f64::INFINITY);
    }
    Ok(Standard {
        cols,
        rhs,
        cost,
        upper,
        row_sign,
        map,
        n_structural,
    })
}

struct Simplex<'a> {
    cols: &'a [Vec<f64>],
    rhs: &'a [f64],
    upper: Vec<f64>,
    n_structural: usize,
    n_total: usize,
    basis: Vec<usize>,
    // position in `basis`, or None when nonbasic
    basis_pos: Vec<Option<usize>>,
    at_upper: Vec<bool>,
    x_basic: Vec<f64>,
}

impl<'a> Simplex<'a> {
    fn new(std: &'a Standard) -> Self {
        let m = std.rhs.len();
        let n_total = std.cols.len();
        let basis: Vec<usize> = (std.n_structural..n_total).collect();
        let mut basis_pos = vec![None; n_total];
        for (k, &j) in basis.iter().enumerate() {
            basis_pos[j] = Some(k);
        }
        Simplex {
            cols: &std.cols,
            rhs: &std.rhs,
            upper: std.upper.clone(),
            n_structural: std.n_structural,
            n_total,
            basis,
            basis_pos,
            at_upper: vec![false; n_total],
            x_basic: std.rhs[..m].to_vec(),
        }
    }

    fn value_of(&self, j: usize) -> f64 {
        match self.basis_pos[j] {
            Some(k) => self.x_basic[k],
            None if self.at_upper[j] => self.upper[j],
            None => 0.0,
        }
    }

    fn factor(&self) -> Result<Lu, LpError> {
        let m = self.rhs.len();
        let mut b = Matrix::zeros(m, m);
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                b[(i, k)] = self.cols[j][i];
            }
        }
        Lu::factor(&b, LU_PIVOT_TOL).ok_or(LpError::SingularBasis)
    }

    fn recompute_basic(&mut self, lu: &Lu) {
        let mut r = self.rhs.to_vec();
        for j in 0..self.n_total {
            if self.basis_pos[j].is_none() && self.at_upper[j] {
                let u = self.upper[j];
                for (ri, a) in r.iter_mut().zip(&self.cols[j]) {
                    *ri -= u * a;
                }
            }
        }
        self.x_basic = lu.solve(&r);
    }

    fn duals(&self, cost: &[f64]) -> Result<Vec<f64>, LpError> {
        let lu = self.factor()?;
        let cb: Vec<f64> = self.basis.iter().map(|&j| cost[j]).collect();
        Ok(lu.solve_transpose(&cb))
    }

    /// Runs simplex iterations for `cost`. Returns `Ok(false)` on an
    /// unbounded ray.
    fn run(&mut self, cost: &[f64], phase_one: bool, cap: usize) -> Result<bool, LpError> {
        let m = self.rhs.len();
        if m == 0 {
            // No rows: each variable sits at whichever bound its cost prefers.
            for j in 0..self.n_total {
                if cost[j] < 0.0 {
                    if self.upper[j].is_infinite() {
                        return Ok(false);
                    }
                    self.at_upper[j] = true;
                } else {
                    self.at_upper[j] = false;
                }
            }
            return Ok(true);
        }
        for _ in 0..cap {
            let lu = self.factor()?;
            self.recompute_basic(&lu);
            let cb: Vec<f64> = self.basis.iter().map(|&j| cost[j]).collect();
            let pi = lu.solve_transpose(&cb);

            // Bland: the lowest-index improving column enters.
            let mut entering = None;
            for j in 0..self.n_total {
                if self.basis_pos[j].is_some() || self.upper[j] <= 0.0 {
                    continue;
                }
                if !phase_one && j >= self.n_structural {
                    continue;
                }
                let d = cost[j] - dot(&pi, &self.cols[j]);
                let scale = 1.0 + cost[j].abs();
                if !self.at_upper[j] && d < -COST_TOL * scale {
                    entering = Some((j, 1.0));
                    break;
                }
                if self.at_upper[j] && d > COST_TOL * scale {
                    entering = Some((j, -1.0));
                    break;
                }
            }
            let Some((q, dir)) = entering else {
                return Ok(true);
            };

            let w = lu.solve(&self.cols[q]);
            // x_B(θ) = x_B - dir·θ·w
            let limits: Vec<(usize, f64, bool)> = (0..m)
                .filter_map(|k| {
                    let rate = -dir * w[k];
                    let j = self.basis[k];
                    if rate < -PIVOT_TOL {
                        Some((k, self.x_basic[k].max(0.0) / -rate, false))
                    } else if rate > PIVOT_TOL && self.upper[j].is_finite() {
                        Some((k, (self.upper[j] - self.x_basic[k]).max(0.0) / rate, true))
                    } else {
                        None
                    }
                })
                .collect();
            let best_ratio = limits.iter().fold(f64::INFINITY, |a, l| a.min(l.1));
            let tie_tol = 1e-12 * (1.0 + best_ratio);
            // Bland again: among tied rows the lowest-index basic variable leaves.
            let leave = limits
                .iter()
                .filter(|l| l.1 <= best_ratio + tie_tol)
                .min_by_key(|l| self.basis[l.0])
                .map(|l| (l.0, l.2));

            let flip = self.upper[q];
            if flip.is_finite() && flip <= best_ratio {
                self.at_upper[q] = !self.at_upper[q];
                continue;
            }
            let Some((k, to_upper)) = leave else {
                return Ok(false);
            };
            let out = self.basis[k];
            self.basis_pos[out] = None;
            self.at_upper[out] = to_upper;
            self.basis[k] = q;
            self.basis_pos[q] = Some(k);
            self.at_upper[q] = false;
        }
        Err(LpError::IterationLimit(cap))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
