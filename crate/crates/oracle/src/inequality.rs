use hoffman_core::certkit::IndexSet;
use hoffman_core::linalg::{Matrix, NormTag};
use hoffman_core::polylp::{min_conic_image_norm, LpBuilder, LpStatus, NormConfig, Relation};
use hoffman_core::{Error, Result};

use crate::{all_subsets, guard, inner_min_norm, MAX_BILEVEL_SET, MAX_INEQ_ROWS};

fn exact_only(cfg: NormConfig) -> Result<()> {
    if cfg.is_exact() {
        Ok(())
    } else {
        Err(Error::UnsupportedNorms {
            domain: cfg.domain,
            codomain: cfg.codomain,
            context: "oracle",
        })
    }
}

/// `H(A)` by scanning every row subset with the library's surjectivity probe.
pub fn oracle_hoffman_enumerate(a: &Matrix, cfg: NormConfig) -> Result<f64> {
    guard("rows for subset enumeration", a.rows(), MAX_INEQ_ROWS)?;
    exact_only(cfg)?;
    let mut h: f64 = 0.0;
    for j in all_subsets(a.rows()).filter(|j| !j.is_empty()) {
        let out = min_conic_image_norm(a, &j, cfg)?;
        if out.surjective {
            h = h.max(1.0 / out.value);
        }
    }
    Ok(h)
}

/// Gordan: `A_J` is surjective onto `R^J + R^J_+` iff `A_J x < 0` has a
/// solution. Decided by `max τ` subject to `A_J x + τ ≤ 0` in a box.
pub fn gordan_surjective(a: &Matrix, j: &IndexSet) -> Result<bool> {
    if j.is_empty() {
        return Ok(true);
    }
    let n = a.cols();
    let mut lp = LpBuilder::new();
    let x = lp.add_vars(n, Some(-1.0), Some(1.0), 0.0);
    let tau = lp.add_var(None, Some(1.0), -1.0);
    for i in j.iter() {
        let mut t: Vec<(usize, f64)> = a.row(i).iter().enumerate().map(|(k, &v)| (x + k, v)).collect();
        t.push((tau, 1.0));
        lp.add_row(t, Relation::Le, 0.0);
    }
    let out = lp.solve()?;
    let scale = 1.0f64.max(a.max_row_norm(NormTag::L1));
    Ok(out.status == LpStatus::Optimal && out.primal[tau] > 1e-9 * scale)
}

/// `min{‖A_Jᵀ v‖* : v ≥ 0, ‖v‖* = 1}` written out directly. For the ℓ1
/// codomain the unit sphere of the ℓ∞ dual is the union of the facets
/// `v_i = 1`, one LP each.
pub fn conic_value_direct(a: &Matrix, j: &IndexSet, cfg: NormConfig) -> Result<f64> {
    exact_only(cfg)?;
    let members = j.members();
    if members.is_empty() {
        return Ok(f64::INFINITY);
    }
    let n = a.cols();
    let solve_with = |pinned: Option<usize>| -> Result<f64> {
        let mut lp = LpBuilder::new();
        let v = lp.add_vars(members.len(), Some(0.0), None, 0.0);
        match pinned {
            None => lp.add_row((0..members.len()).map(|k| (v + k, 1.0)).collect(), Relation::Eq, 1.0),
            Some(p) => {
                for k in 0..members.len() {
                    lp.set_bounds(v + k, Some(0.0), Some(1.0));
                }
                lp.set_bounds(v + p, Some(1.0), Some(1.0));
            }
        }
        // w = A_Jᵀ v, norm of w in the dual of the domain norm.
        let w = lp.add_vars(n, None, None, 0.0);
        for col in 0..n {
            let mut t = vec![(w + col, -1.0)];
            for (k, &i) in members.iter().enumerate() {
                if a[(i, col)] != 0.0 {
                    t.push((v + k, a[(i, col)]));
                }
            }
            lp.add_row(t, Relation::Eq, 0.0);
        }
        match cfg.domain.dual() {
            NormTag::L1 => {
                let s = lp.add_vars(n, Some(0.0), None, 1.0);
                for col in 0..n {
                    lp.add_row(vec![(s + col, 1.0), (w + col, -1.0)], Relation::Ge, 0.0);
                    lp.add_row(vec![(s + col, 1.0), (w + col, 1.0)], Relation::Ge, 0.0);
                }
            }
            _ => {
                let t = lp.add_var(Some(0.0), None, 1.0);
                for col in 0..n {
                    lp.add_row(vec![(t, 1.0), (w + col, -1.0)], Relation::Ge, 0.0);
                    lp.add_row(vec![(t, 1.0), (w + col, 1.0)], Relation::Ge, 0.0);
                }
            }
        }
        let out = lp.solve()?;
        match out.status {
            LpStatus::Optimal => Ok(out.value),
            _ => Ok(f64::INFINITY),
        }
    };
    match cfg.codomain {
        NormTag::LInf => solve_with(None),
        _ => {
            let mut best = f64::INFINITY;
            for p in 0..members.len() {
                best = best.min(solve_with(Some(p))?);
            }
            Ok(best)
        }
    }
}

/// `H(A)` from Gordan feasibility and the directly written value LP; shares
/// no formulation code with the library.
pub fn oracle_hoffman_dual_route(a: &Matrix, cfg: NormConfig) -> Result<f64> {
    guard("rows for subset enumeration", a.rows(), MAX_INEQ_ROWS)?;
    let mut h: f64 = 0.0;
    for j in all_subsets(a.rows()).filter(|j| !j.is_empty()) {
        if gordan_surjective(a, &j)? {
            h = h.max(1.0 / conic_value_direct(a, &j, cfg)?);
        }
    }
    Ok(h)
}

// Vertices of the codomain unit ball restricted to the coordinates `k`.
fn coordinate_ball_vertices(k: usize, tag: NormTag) -> Vec<Vec<f64>> {
    match tag {
        NormTag::L1 => (0..k)
            .flat_map(|i| {
                [1.0, -1.0].into_iter().map(move |s| {
                    let mut y = vec![0.0; k];
                    y[i] = s;
                    y
                })
            })
            .collect(),
        _ => (0u64..(1u64 << k))
            .map(|mask| (0..k).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect())
            .collect(),
    }
}

// max over ball vertices y (on the `free` coordinates of J, zero elsewhere)
// of min{‖x‖ : A_J x ≤ y}.
fn bilevel(a: &Matrix, j: &IndexSet, free: &IndexSet, cfg: NormConfig) -> Result<f64> {
    let members = j.members();
    let free_pos: Vec<usize> = members
        .iter()
        .enumerate()
        .filter(|(_, &i)| free.contains(i))
        .map(|(k, _)| k)
        .collect();
    if free_pos.is_empty() {
        return Ok(0.0);
    }
    let a_j = a.submatrix_rows(j)?;
    let empty = Matrix::zeros(0, a.cols());
    let mut best: f64 = 0.0;
    for vertex in coordinate_ball_vertices(free_pos.len(), cfg.codomain) {
        let mut y = vec![0.0; members.len()];
        for (k, &p) in free_pos.iter().enumerate() {
            y[p] = vertex[k];
        }
        match inner_min_norm(&empty, &[], &a_j, &y, cfg.domain)? {
            Some(v) => best = best.max(v),
            None => return Ok(f64::INFINITY),
        }
    }
    Ok(best)
}

/// `max_{‖y‖ ≤ 1} min_{A_J x ≤ y_J} ‖x‖` by evaluating the inner LP at every
/// vertex of the unit ball; the inner value is convex in `y`.
pub fn oracle_bilevel_maxmin(a: &Matrix, j: &IndexSet, cfg: NormConfig) -> Result<f64> {
    exact_only(cfg)?;
    guard("set for vertex enumeration", j.len(), MAX_BILEVEL_SET)?;
    bilevel(a, j, j, cfg)
}

/// `H(A | L)` by subset scan; per set the primal max–min with `y` vanishing
/// outside `L`.
pub fn oracle_restricted_enumerate(a: &Matrix, l: &IndexSet, cfg: NormConfig) -> Result<f64> {
    exact_only(cfg)?;
    guard("rows for subset enumeration", a.rows(), MAX_INEQ_ROWS)?;
    let mut h: f64 = 0.0;
    for j in all_subsets(a.rows()).filter(|j| !j.is_empty()) {
        if gordan_surjective(a, &j)? {
            h = h.max(bilevel(a, &j, l, cfg)?);
        }
    }
    Ok(h)
}
