use hoffman_core::certkit::IndexSet;
use hoffman_core::linalg::{colspace_basis, Matrix, NormTag, DEFAULT_RANK_TOL};
use hoffman_core::polylp::{LpBuilder, LpStatus, NormConfig, NormalizedBlock, Relation};
use hoffman_core::{Error, Result};

use crate::{all_subsets, ball_vertices, guard, inner_min_norm, MAX_MIXED_ROWS};

/// `[A, C, J]` has a linear-subspace image iff some `x` has `A x = 0` and
/// `C_J x < 0` (Motzkin's alternative).
pub fn relatively_surjective(a: &Matrix, c: &Matrix, j: &IndexSet) -> Result<bool> {
    if j.is_empty() {
        return Ok(true);
    }
    let n = c.cols();
    let mut lp = LpBuilder::new();
    let x = lp.add_vars(n, Some(-1.0), Some(1.0), 0.0);
    let tau = lp.add_var(None, Some(1.0), -1.0);
    for row in a.row_iter() {
        lp.add_row(row.iter().enumerate().map(|(k, &v)| (x + k, v)).collect(), Relation::Eq, 0.0);
    }
    for i in j.iter() {
        let mut t: Vec<(usize, f64)> = c.row(i).iter().enumerate().map(|(k, &v)| (x + k, v)).collect();
        t.push((tau, 1.0));
        lp.add_row(t, Relation::Le, 0.0);
    }
    let out = lp.solve()?;
    let scale = 1.0f64
        .max(a.max_row_norm(NormTag::L1))
        .max(c.max_row_norm(NormTag::L1));
    Ok(out.status == LpStatus::Optimal && out.primal[tau] > 1e-9 * scale)
}

/// `H_J` for a mixed system from its primal side:
/// `max min{‖x‖ : A x = y, C_J x ≤ w}` over `(y, w)` in the codomain unit
/// ball intersected with the image subspace, with `w = 0` when only the
/// equations are measured and `y = 0` when only the inequalities are.
pub fn mixed_primal_value(
    a: &Matrix,
    c: &Matrix,
    j: &IndexSet,
    cfg: NormConfig,
    block: NormalizedBlock,
) -> Result<f64> {
    if !cfg.domain.is_polyhedral() || !cfg.codomain.is_polyhedral() {
        return Err(Error::UnsupportedNorms {
            domain: cfg.domain,
            codomain: cfg.codomain,
            context: "mixed oracle",
        });
    }
    let m = a.rows();
    let k = j.len();
    let c_j = c.submatrix_rows(j)?;
    let range = colspace_basis(a, DEFAULT_RANK_TOL);
    let (use_y, use_w) = match block {
        NormalizedBlock::Both => (true, true),
        NormalizedBlock::Equations => (true, false),
        NormalizedBlock::Inequalities => (false, true),
    };
    let r = if use_y { range.dim() } else { 0 };
    let kw = if use_w { k } else { 0 };
    let big_n = if use_y { m } else { 0 } + kw;
    let mut q = Matrix::zeros(big_n, r + kw);
    if use_y {
        for (col, v) in range.vectors().iter().enumerate() {
            for i in 0..m {
                q[(i, col)] = v[i];
            }
        }
    }
    let y_len = if use_y { m } else { 0 };
    for t in 0..kw {
        q[(y_len + t, r + t)] = 1.0;
    }
    let mut best: f64 = 0.0;
    for u in ball_vertices(&q, cfg.codomain) {
        let y = if use_y { u[..m].to_vec() } else { vec![0.0; m] };
        let w = if use_w { u[y_len..].to_vec() } else { vec![0.0; k] };
        match inner_min_norm(a, &y, &c_j, &w, cfg.domain)? {
            Some(v) => best = best.max(v),
            None => return Ok(f64::INFINITY),
        }
    }
    Ok(best)
}

/// `H(A; C)` (or an easy-block variant) by scanning every `J ⊆ {1..p}`.
pub fn oracle_mixed_enumerate(
    a: &Matrix,
    c: &Matrix,
    cfg: NormConfig,
    block: NormalizedBlock,
) -> Result<f64> {
    guard("inequality rows for subset enumeration", c.rows(), MAX_MIXED_ROWS)?;
    let mut h: f64 = 0.0;
    for j in all_subsets(c.rows()) {
        if relatively_surjective(a, c, &j)? {
            h = h.max(mixed_primal_value(a, c, &j, cfg, block)?);
        }
    }
    Ok(h)
}
