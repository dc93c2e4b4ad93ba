//! Brute-force reference computations for testing `hoffman-core`.
//!
//! Everything here is exponential in the number of rows and guarded by hard
//! size limits. Where possible the formulations differ from the ones used by
//! the library: values come from the primal max–min side (vertex enumeration
//! of the unit ball) and surjectivity from Gordan-type feasibility LPs, so an
//! agreement between the two is a real cross-check.

mod euclid;
mod facial;
mod inequality;
mod mixed;

pub use euclid::{l2_boundary_distance, l2_gauge, l2_in_image_set};
pub use facial::{oracle_facial_enumerate, oracle_facial_faces};
pub use inequality::{
    conic_value_direct, gordan_surjective, oracle_bilevel_maxmin, oracle_hoffman_dual_route,
    oracle_hoffman_enumerate, oracle_restricted_enumerate,
};
pub use mixed::{mixed_primal_value, oracle_mixed_enumerate, relatively_surjective};

use hoffman_core::certkit::IndexSet;
use hoffman_core::linalg::{nullspace_basis, Matrix, NormTag};
use hoffman_core::polylp::{LpBuilder, LpStatus, Relation};
use hoffman_core::{Error, Result};

pub const MAX_INEQ_ROWS: usize = 14;
pub const MAX_MIXED_ROWS: usize = 12;
pub const MAX_BILEVEL_SET: usize = 16;
pub const MAX_FACIAL_COLS: usize = 8;

fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

fn all_subsets(m: usize) -> impl Iterator<Item = IndexSet> {
    (0u64..(1u64 << m)).map(move |mask| IndexSet::from_mask(m, mask))
}

/// `min ‖x‖ s.t. E x = e, G x ≤ g`, or `None` when infeasible. Either block
/// may have zero rows but both must have the same column count.
pub fn inner_min_norm(
    e: &Matrix,
    e_rhs: &[f64],
    g: &Matrix,
    g_rhs: &[f64],
    domain: NormTag,
) -> Result<Option<f64>> {
    let n = e.cols().max(g.cols());
    let mut lp = LpBuilder::new();
    let x = lp.add_vars(n, None, None, 0.0);
    match domain {
        NormTag::LInf => {
            let t = lp.add_var(Some(0.0), None, 1.0);
            for i in 0..n {
                lp.add_row(vec![(x + i, 1.0), (t, -1.0)], Relation::Le, 0.0);
                lp.add_row(vec![(x + i, 1.0), (t, 1.0)], Relation::Ge, 0.0);
            }
        }
        NormTag::L1 => {
            // |x_i| ≤ s_i
            let s = lp.add_vars(n, Some(0.0), None, 1.0);
            for i in 0..n {
                lp.add_row(vec![(x + i, 1.0), (s + i, -1.0)], Relation::Le, 0.0);
                lp.add_row(vec![(x + i, 1.0), (s + i, 1.0)], Relation::Ge, 0.0);
            }
        }
        NormTag::L2 => {
            return Err(Error::UnsupportedNorms {
                domain,
                codomain: domain,
                context: "oracle inner minimization",
            })
        }
    }
    for (row, &b) in e.row_iter().zip(e_rhs) {
        lp.add_row(terms(x, row), Relation::Eq, b);
    }
    for (row, &b) in g.row_iter().zip(g_rhs) {
        lp.add_row(terms(x, row), Relation::Le, b);
    }
    let out = lp.solve()?;
    Ok(match out.status {
        LpStatus::Optimal => Some(out.value),
        _ => None,
    })
}

fn terms(offset: usize, row: &[f64]) -> Vec<(usize, f64)> {
    row.iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(k, &v)| (offset + k, v))
        .collect()
}

/// Vertices of `{u ∈ span(Q) : ‖u‖ ≤ 1}` for `Q` with orthonormal columns and
/// a polyhedral norm, deduplicated.
pub fn ball_vertices(q: &Matrix, tag: NormTag) -> Vec<Vec<f64>> {
    let big_n = q.rows();
    let d = q.cols();
    let mut out: Vec<Vec<f64>> = Vec::new();
    if d == 0 {
        return out;
    }
    let mut push = |u: Vec<f64>| {
        if !out
            .iter()
            .any(|w| w.iter().zip(&u).all(|(a, b)| (a - b).abs() <= 1e-9))
        {
            out.push(u);
        }
    };
    if d == big_n {
        // Full space: the textbook vertex sets.
        match tag {
            NormTag::L1 => {
                for i in 0..big_n {
                    for s in [1.0, -1.0] {
                        let mut u = vec![0.0; big_n];
                        u[i] = s;
                        push(u);
                    }
                }
            }
            _ => {
                for mask in 0u64..(1u64 << big_n) {
                    push((0..big_n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect());
                }
            }
        }
        return out;
    }
    match tag {
        NormTag::L1 => {
            // A vertex lies in a unique one-dimensional coordinate slice of
            // the subspace: {u ∈ S : u_i = 0 for i outside T}.
            for mask in 1u64..(1u64 << big_n) {
                let outside: Vec<usize> = (0..big_n).filter(|i| mask >> i & 1 == 0).collect();
                let rows = Matrix::from_rows_with_cols(
                    &outside.iter().map(|&i| q.row(i).to_vec()).collect::<Vec<_>>(),
                    d,
                )
                .expect("consistent widths");
                let null = nullspace_basis(&rows, 1e-10);
                if null.dim() != 1 {
                    continue;
                }
                let u = q.mul_vec(&null.vectors()[0]);
                if (0..big_n).any(|i| mask >> i & 1 == 1 && u[i].abs() <= 1e-9) {
                    continue;
                }
                let len: f64 = u.iter().map(|v| v.abs()).sum();
                push(u.iter().map(|v| v / len).collect());
                push(u.iter().map(|v| -v / len).collect());
            }
        }
        _ => {
            // d coordinates pinned at ±1 with the rest inside the box.
            for mask in 0u64..(1u64 << big_n) {
                if mask.count_ones() as usize != d {
                    continue;
                }
                let pinned: Vec<usize> = (0..big_n).filter(|i| mask >> i & 1 == 1).collect();
                let sub = Matrix::from_rows_with_cols(
                    &pinned.iter().map(|&i| q.row(i).to_vec()).collect::<Vec<_>>(),
                    d,
                )
                .expect("consistent widths");
                let Some(lu) = hoffman_core::linalg::Lu::factor(&sub, 1e-12) else {
                    continue;
                };
                for signs in 0u64..(1u64 << d) {
                    let rhs: Vec<f64> =
                        (0..d).map(|k| if signs >> k & 1 == 1 { 1.0 } else { -1.0 }).collect();
                    let u = q.mul_vec(&lu.solve(&rhs));
                    if u.iter().all(|v| v.abs() <= 1.0 + 1e-9) {
                        push(u);
                    }
                }
            }
        }
    }
    out
}
