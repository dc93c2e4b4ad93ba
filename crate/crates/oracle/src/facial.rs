use hoffman_core::certkit::IndexSet;
use hoffman_core::linalg::{Matrix, NormTag};
use hoffman_core::polylp::{facial_value, min_relsurj_detect, LpBuilder, LpStatus, NormConfig, Relation};
use hoffman_core::{Error, Result};

use crate::{all_subsets, guard, MAX_FACIAL_COLS};

/// The facial constant by scanning every `J ⊆ {1..n}` with the library's
/// per-set detection and value.
pub fn oracle_facial_enumerate(a: &Matrix, cfg: NormConfig) -> Result<f64> {
    let n = a.cols();
    guard("columns for subset enumeration", n, MAX_FACIAL_COLS)?;
    let ones = Matrix::from_row_major(1, n, vec![1.0; n])?;
    let a_tilde = a.vstack(&ones)?;
    let neg_identity = Matrix::identity(n).scaled(-1.0);
    let mut h: f64 = 0.0;
    for j in all_subsets(n) {
        if min_relsurj_detect(&a_tilde, &neg_identity, &j)?.surjective {
            h = h.max(facial_value(a, &j, cfg)?.hoffman_value());
        }
    }
    Ok(h)
}

// Columns in `v` are exactly the points of conv(A) on some face: a linear
// functional is constant on them and strictly smaller on the rest.
fn is_face(a: &Matrix, v: &IndexSet) -> Result<bool> {
    let m = a.rows();
    let mut lp = LpBuilder::new();
    let c = lp.add_vars(m, None, None, 0.0);
    let beta = lp.add_var(None, None, 0.0);
    for k in 0..a.cols() {
        let mut t: Vec<(usize, f64)> = (0..m).map(|i| (c + i, a[(i, k)])).collect();
        t.push((beta, -1.0));
        if v.contains(k) {
            lp.add_row(t, Relation::Eq, 0.0);
        } else {
            lp.add_row(t, Relation::Le, -1.0);
        }
    }
    Ok(lp.solve()?.status == LpStatus::Optimal)
}

// dist(aff{a_i : i ∈ v}, conv{a_k : k ∉ v}) in the given norm on R^m.
fn affine_to_hull_distance(a: &Matrix, v: &IndexSet, tag: NormTag) -> Result<f64> {
    let m = a.rows();
    let n = a.cols();
    let mut lp = LpBuilder::new();
    let lambda = lp.add_vars(n, None, None, 0.0);
    for k in 0..n {
        if !v.contains(k) {
            lp.set_bounds(lambda + k, Some(0.0), None);
        }
    }
    lp.add_row(v.iter().map(|k| (lambda + k, 1.0)).collect(), Relation::Eq, 1.0);
    lp.add_row(v.complement().iter().map(|k| (lambda + k, 1.0)).collect(), Relation::Eq, 1.0);
    // r = Σ_v λ a − Σ_rest λ a
    let r = lp.add_vars(m, None, None, 0.0);
    for i in 0..m {
        let mut t = vec![(r + i, -1.0)];
        for k in 0..n {
            let sign = if v.contains(k) { 1.0 } else { -1.0 };
            t.push((lambda + k, sign * a[(i, k)]));
        }
        lp.add_row(t, Relation::Eq, 0.0);
    }
    match tag {
        NormTag::L1 => {
            let s = lp.add_vars(m, Some(0.0), None, 1.0);
            for i in 0..m {
                lp.add_row(vec![(s + i, 1.0), (r + i, -1.0)], Relation::Ge, 0.0);
                lp.add_row(vec![(s + i, 1.0), (r + i, 1.0)], Relation::Ge, 0.0);
            }
        }
        NormTag::LInf => {
            let t = lp.add_var(Some(0.0), None, 1.0);
            for i in 0..m {
                lp.add_row(vec![(t, 1.0), (r + i, -1.0)], Relation::Ge, 0.0);
                lp.add_row(vec![(t, 1.0), (r + i, 1.0)], Relation::Ge, 0.0);
            }
        }
        NormTag::L2 => {
            return Err(Error::UnsupportedNorms {
                domain: NormTag::L2,
                codomain: NormTag::L2,
                context: "face-enumeration oracle",
            })
        }
    }
    let out = lp.solve()?;
    Ok(if out.status == LpStatus::Optimal {
        out.value
    } else {
        f64::INFINITY
    })
}

/// Facial distance of `conv(A)`: the minimum over proper faces of the
/// distance from the face's affine hull to the hull of the remaining
/// columns, measured in the codomain norm. `+∞` when there is no proper
/// face.
pub fn oracle_facial_faces(a: &Matrix, cfg: NormConfig) -> Result<f64> {
    let n = a.cols();
    guard("columns for face enumeration", n, MAX_FACIAL_COLS)?;
    let mut best = f64::INFINITY;
    for v in all_subsets(n) {
        if v.is_empty() || v.len() == n || !is_face(a, &v)? {
            continue;
        }
        best = best.min(affine_to_hull_distance(a, &v, cfg.codomain)?);
    }
    Ok(best)
}
