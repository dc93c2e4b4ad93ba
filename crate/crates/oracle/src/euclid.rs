use hoffman_core::certkit::IndexSet;
use hoffman_core::linalg::{least_squares_min_norm, norm, Matrix, NormTag};
use hoffman_core::Result;

use crate::guard;

const MAX_ACTIVE_SET: usize = 12;

/// `min{‖x‖₂ : A x = y, C_J x ≤ w}`, `None` when infeasible.
///
/// The minimizer is the least-norm solution of the system with its active
/// inequalities turned into equations, so trying every active set and
/// keeping the feasible candidates finds it exactly.
pub fn l2_gauge(a: &Matrix, c: &Matrix, j: &IndexSet, y: &[f64], w: &[f64]) -> Result<Option<f64>> {
    guard("inequality set for active-set enumeration", j.len(), MAX_ACTIVE_SET)?;
    let c_j = c.submatrix_rows(j)?;
    let k = j.len();
    let scale = 1.0
        + a.max_abs().max(c.max_abs()) * (1.0 + norm(y, NormTag::LInf).max(norm(w, NormTag::LInf)));
    let tol = 1e-9 * scale;
    let mut best: Option<f64> = None;
    for mask in 0u64..(1u64 << k) {
        let active: Vec<usize> = (0..k).filter(|t| mask >> t & 1 == 1).collect();
        let mut rows: Vec<Vec<f64>> = a.row_iter().map(|r| r.to_vec()).collect();
        let mut rhs = y.to_vec();
        for &t in &active {
            rows.push(c_j.row(t).to_vec());
            rhs.push(w[t]);
        }
        let sys = Matrix::from_rows_with_cols(&rows, a.cols())?;
        let x = least_squares_min_norm(&sys, &rhs, 1e-12);
        let residual = sys
            .mul_vec(&x)
            .iter()
            .zip(&rhs)
            .fold(0.0f64, |acc, (l, r)| acc.max((l - r).abs()));
        if residual > tol {
            continue;
        }
        if c_j.mul_vec(&x).iter().zip(w).any(|(l, r)| *l > r + tol) {
            continue;
        }
        let len = norm(&x, NormTag::L2);
        if best.map_or(true, |b| len < b) {
            best = Some(len);
        }
    }
    Ok(best)
}

/// Distance from the origin to the boundary of
/// `D = {(A x, C_J x + s) : ‖x‖₂ ≤ 1, s ≥ 0}` along the direction `(y, w)`,
/// which must have unit ℓ2 norm. By homogeneity it is `1 / gauge`.
pub fn l2_boundary_distance(a: &Matrix, c: &Matrix, j: &IndexSet, y: &[f64], w: &[f64]) -> Result<f64> {
    Ok(match l2_gauge(a, c, j, y, w)? {
        Some(g) if g > 0.0 => 1.0 / g,
        Some(_) => f64::INFINITY,
        None => 0.0,
    })
}

/// Membership of `(y, w)` in `D`, up to a relative slack.
pub fn l2_in_image_set(a: &Matrix, c: &Matrix, j: &IndexSet, y: &[f64], w: &[f64], slack: f64) -> Result<bool> {
    Ok(l2_gauge(a, c, j, y, w)?.is_some_and(|g| g <= 1.0 + slack))
}
