//! Two-sided Euclidean estimates of `1 / H_J(A; C)`.
//!
//! For ℓ2 norms `1 / H_J` is the distance from the origin to the relative
//! boundary of `D = {(A x, C_J x + s) : ‖x‖₂ ≤ 1, s ≥ 0}`. The barrier
//! `f(x, s) = −log(1 − ‖x‖²) − Σ log s_j`, minimized over the fibre above
//! the origin, induces a self-concordant barrier on `D` whose Dikin
//! ellipsoid at the origin is `{M^{1/2} d : ‖d‖ ≤ 1}` with
//! `M = B ∇²f⁻¹ Bᵀ`, `B = [A 0; C_J I]`. The ellipsoid sits inside `D` and,
//! scaled by `4p + 9`, contains the relevant half of `D`, so the smallest
//! positive singular value of `M^{1/2}` brackets `1 / H_J` within that
//! factor.

use std::collections::BTreeMap;

use crate::certkit::{algorithm1_run, CertificateLedger, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::{
    colspace_basis, dot, norm, nullspace_basis, psd_sqrt, Lu, Matrix, NormTag, Svd,
    DEFAULT_RANK_TOL,
};
use crate::polylp::{min_relsurj_detect, LpBuilder, LpStatus, Relation};

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_CAP: usize = 200;

/// Minimizer of the barrier over `{A x = 0, C_J x + s = 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BarrierCenter {
    pub x_bar: Vec<f64>,
    pub s_bar: Vec<f64>,
    pub newton_iterations: usize,
}

impl BarrierCenter {
    /// The `x`-block Hessian is `a·I + b·x xᵀ`; returns `(a, b)`.
    pub fn x_hessian_coefficients(&self) -> (f64, f64) {
        let q = 1.0 - dot(&self.x_bar, &self.x_bar);
        (2.0 / q, 4.0 / (q * q))
    }

    /// Diagonal of the `s`-block Hessian, `1 / s_j²`.
    pub fn s_hessian_diagonal(&self) -> Vec<f64> {
        self.s_bar.iter().map(|s| 1.0 / (s * s)).collect()
    }

    /// Dense `∇²f(x̄, s̄)`.
    pub fn hessian(&self) -> Matrix {
        let n = self.x_bar.len();
        let k = self.s_bar.len();
        let (a, b) = self.x_hessian_coefficients();
        let mut h = Matrix::zeros(n + k, n + k);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = b * self.x_bar[i] * self.x_bar[j];
            }
            h[(i, i)] += a;
        }
        for (j, d) in self.s_hessian_diagonal().into_iter().enumerate() {
            h[(n + j, n + j)] = d;
        }
        h
    }
}

/// Bracket `lower ≤ 1 / H_J ≤ upper` with `upper = (4p + 9) · lower`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DikinBounds {
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
    pub p: usize,
    pub factor: f64,
}

/// The Dikin ellipsoid at the origin together with the data behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct DikinEllipsoid {
    pub center: BarrierCenter,
    /// `M`, of order `m + |J|`.
    pub m: Matrix,
    /// Orthonormal basis (columns) of `(A R^n) × R^J`.
    pub subspace: Matrix,
    pub bounds: DikinBounds,
}

impl DikinEllipsoid {
    /// `M^{1/2}`.
    pub fn sqrt_m(&self) -> Matrix {
        psd_sqrt(&self.m)
    }

    /// Eigenpairs of `M` restricted to the subspace, as (eigenvalue,
    /// direction in `R^{m+|J|}`), largest first.
    pub fn restricted_eigenpairs(&self) -> Vec<(f64, Vec<f64>)> {
        let q = &self.subspace;
        if q.cols() == 0 {
            return Vec::new();
        }
        let reduced = q.transpose().matmul(&self.m).matmul(q);
        let svd = Svd::new(&reduced);
        (0..svd.sigma.len())
            .map(|k| (svd.sigma[k], q.mul_vec(&svd.v.col(k))))
            .collect()
    }
}

fn check_dims(a: &Matrix, c: &Matrix, j: &IndexSet) -> Result<()> {
    if a.cols() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} columns but C has {}",
            a.cols(),
            c.cols()
        )));
    }
    if j.universe() != c.rows() {
        return Err(Error::DimensionMismatch(format!(
            "J is a subset of {} rows but C has {}",
            j.universe(),
            c.rows()
        )));
    }
    Ok(())
}

// −log(1 − ‖ξ‖²) − Σ log(g_j·ξ), or None outside the domain.
fn barrier_value(g: &Matrix, xi: &[f64]) -> Option<f64> {
    let q = 1.0 - dot(xi, xi);
    if q <= 0.0 {
        return None;
    }
    let mut v = -q.ln();
    for row in g.row_iter() {
        let s = dot(row, xi);
        if s <= 0.0 {
            return None;
        }
        v -= s.ln();
    }
    Some(v)
}

/// Minimizes `f` over `{A x = 0, C_J x + s = 0}` by damped Newton steps in a
/// nullspace parametrization `x = N ξ`. Fails with a certificate when the
/// origin is not in the relative interior of `D`.
pub fn barrier_center(a: &Matrix, c: &Matrix, j: &IndexSet) -> Result<BarrierCenter> {
    check_dims(a, c, j)?;
    let detect = min_relsurj_detect(a, c, j)?;
    if !detect.surjective {
        return Err(Error::NotRelativelySurjective {
            support: detect.support,
        });
    }
    let n = a.cols();
    let c_j = c.submatrix_rows(j)?;
    let nb = nullspace_basis(a, DEFAULT_RANK_TOL).to_matrix();
    let k = nb.cols();
    // s = G ξ with G = −C_J N
    let g = c_j.matmul(&nb).scaled(-1.0);

    let mut xi = vec![0.0; k];
    if g.rows() > 0 {
        xi = interior_start(&g, j)?;
    }

    let mut iterations = 0;
    loop {
        let q = 1.0 - dot(&xi, &xi);
        let s: Vec<f64> = g.mul_vec(&xi);
        let mut grad: Vec<f64> = xi.iter().map(|x| 2.0 * x / q).collect();
        let mut hess = Matrix::identity(k).scaled(2.0 / q);
        for r in 0..k {
            for t in 0..k {
                hess[(r, t)] += 4.0 / (q * q) * xi[r] * xi[t];
            }
        }
        for (jj, row) in g.row_iter().enumerate() {
            let inv = 1.0 / s[jj];
            for r in 0..k {
                grad[r] -= row[r] * inv;
                for t in 0..k {
                    hess[(r, t)] += row[r] * row[t] * inv * inv;
                }
            }
        }
        if k == 0 {
            break;
        }
        let lu = Lu::factor(&hess, 1e-14).ok_or(Error::NewtonNonConvergence {
            iterations,
            decrement: f64::NAN,
        })?;
        let step: Vec<f64> = lu.solve(&grad).iter().map(|x| -x).collect();
        let decrement = (-dot(&grad, &step)).max(0.0).sqrt();
        if decrement <= NEWTON_TOL {
            // One last full step costs nothing and squares the error.
            let polished: Vec<f64> = xi.iter().zip(&step).map(|(x, d)| x + d).collect();
            if barrier_value(&g, &polished).is_some() {
                xi = polished;
            }
            break;
        }
        if iterations >= NEWTON_CAP {
            return Err(Error::NewtonNonConvergence {
                iterations,
                decrement,
            });
        }
        iterations += 1;

        let current = barrier_value(&g, &xi).expect("iterate stays interior");
        let slope = dot(&grad, &step);
        let mut t = if decrement > 0.25 {
            1.0 / (1.0 + decrement)
        } else {
            1.0
        };
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = xi.iter().zip(&step).map(|(x, d)| x + t * d).collect();
            if let Some(v) = barrier_value(&g, &trial) {
                if v <= current + 0.25 * t * slope || decrement <= 1e-6 {
                    xi = trial;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NewtonNonConvergence {
                iterations,
                decrement,
            });
        }
    }

    let x_bar = if k == 0 { vec![0.0; n] } else { nb.mul_vec(&xi) };
    let s_bar = c_j.mul_vec(&x_bar).iter().map(|v| -v).collect();
    Ok(BarrierCenter {
        x_bar,
        s_bar,
        newton_iterations: iterations,
    })
}

// Phase 1: max τ subject to G ξ ≥ τ, −1 ≤ ξ ≤ 1, τ ≤ 1; then scale into
// the ball of radius 1/2.
fn interior_start(g: &Matrix, j: &IndexSet) -> Result<Vec<f64>> {
    let k = g.cols();
    let mut lp = LpBuilder::new();
    let xi = lp.add_vars(k, Some(-1.0), Some(1.0), 0.0);
    let tau = lp.add_var(None, Some(1.0), -1.0);
    for row in g.row_iter() {
        let mut terms: Vec<(usize, f64)> = row.iter().enumerate().map(|(r, &v)| (xi + r, v)).collect();
        terms.push((tau, -1.0));
        lp.add_row(terms, Relation::Ge, 0.0);
    }
    let out = lp.solve()?;
    let tau_star = if out.status == LpStatus::Optimal {
        out.primal[tau]
    } else {
        0.0
    };
    if tau_star <= 1e-9 {
        return Err(Error::NotRelativelySurjective { support: j.clone() });
    }
    let v = &out.primal[xi..xi + k];
    let len = norm(v, NormTag::L2);
    Ok(v.iter().map(|x| 0.5 * x / len).collect())
}

/// `M = B ∇²f(x̄, s̄)⁻¹ Bᵀ` with `B = [A 0; C_J I]`, using the closed-form
/// inverse of `a·I + b·x xᵀ`.
pub fn dikin_matrix(a: &Matrix, c: &Matrix, j: &IndexSet, center: &BarrierCenter) -> Result<Matrix> {
    check_dims(a, c, j)?;
    let c_j = c.submatrix_rows(j)?;
    let (m, n, k) = (a.rows(), a.cols(), j.len());
    let x = &center.x_bar;
    let (ca, cb) = center.x_hessian_coefficients();
    let rank_one = cb / (ca + cb * dot(x, x));
    // H_x⁻¹ = (1/a)(I − rank_one · x xᵀ)
    let mut hx_inv = Matrix::identity(n);
    for r in 0..n {
        for t in 0..n {
            hx_inv[(r, t)] -= rank_one * x[r] * x[t];
        }
    }
    let hx_inv = hx_inv.scaled(1.0 / ca);
    let top = a.vstack(&c_j)?;
    let mut out = top.matmul(&hx_inv).matmul(&top.transpose());
    for (jj, s) in center.s_bar.iter().enumerate() {
        out[(m + jj, m + jj)] += s * s;
    }
    debug_assert_eq!(out.rows(), m + k);
    Ok(out)
}

/// Builds the Dikin ellipsoid for `[A, C, J]` and its singular-value bracket.
pub fn dikin_ellipsoid(a: &Matrix, c: &Matrix, j: &IndexSet) -> Result<DikinEllipsoid> {
    let center = barrier_center(a, c, j)?;
    let m_full = dikin_matrix(a, c, j, &center)?;
    let range = colspace_basis(a, DEFAULT_RANK_TOL);
    let (m, r, k) = (a.rows(), range.dim(), j.len());
    if r + k == 0 {
        return Err(Error::TrivialImage);
    }
    let mut q = Matrix::zeros(m + k, r + k);
    for (col, v) in range.vectors().iter().enumerate() {
        for i in 0..m {
            q[(i, col)] = v[i];
        }
    }
    for jj in 0..k {
        q[(m + jj, r + jj)] = 1.0;
    }
    let reduced = q.transpose().matmul(&m_full).matmul(&q);
    let sigma = crate::linalg::psd_sqrt_smallest_positive(&reduced, DEFAULT_RANK_TOL);
    if sigma == 0.0 {
        return Err(Error::TrivialImage);
    }
    let p = c.rows();
    let factor = (4 * p + 9) as f64;
    Ok(DikinEllipsoid {
        center,
        m: m_full,
        subspace: q,
        bounds: DikinBounds {
            sigma,
            lower: sigma,
            upper: factor * sigma,
            p,
            factor,
        },
    })
}

pub fn dikin_bounds(a: &Matrix, c: &Matrix, j: &IndexSet) -> Result<DikinBounds> {
    Ok(dikin_ellipsoid(a, c, j)?.bounds)
}

/// Bracket on the Euclidean `H(A; C)` from the certificate search, with each
/// certificate's value replaced by its Dikin bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct L2Bracket {
    pub h_lower: f64,
    pub h_upper: f64,
    pub ledger: CertificateLedger,
    pub per_f: BTreeMap<IndexSet, Option<DikinBounds>>,
}

pub fn bracket_hoffman_l2(a: &Matrix, c: &Matrix) -> Result<L2Bracket> {
    if a.cols() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} columns but C has {}",
            a.cols(),
            c.cols()
        )));
    }
    let mut per_f = BTreeMap::new();
    let ledger = algorithm1_run(
        c.rows(),
        |j: &IndexSet| min_relsurj_detect(a, c, j),
        |j: &IndexSet, _: &_| {
            let bounds = match dikin_bounds(a, c, j) {
                Ok(b) => Some(b),
                Err(Error::TrivialImage) => None,
                Err(e) => return Err(e),
            };
            per_f.insert(j.clone(), bounds);
            // The ledger keeps the upper end of H_F.
            Ok(bounds.map_or(0.0, |b| 1.0 / b.lower))
        },
    )?;
    let h_upper = ledger.best_h();
    let h_lower = per_f
        .values()
        .map(|b| b.map_or(0.0, |b| 1.0 / b.upper))
        .fold(0.0, f64::max);
    Ok(L2Bracket {
        h_lower,
        h_upper,
        ledger,
        per_f,
    })
}
