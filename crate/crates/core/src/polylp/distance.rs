use super::{check_universe, LpBuilder, LpStatus, Relation};
use crate::certkit::IndexSet;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, NormTag};

/// Distance from `u` to `{x : A x ≤ b, eq_a x = eq_b}` in an ℓ1 or ℓ∞ norm,
/// together with a nearest point.
pub fn distance_to_polyhedron(
    u: &[f64],
    a: &Matrix,
    b: &[f64],
    eq_a: Option<&Matrix>,
    eq_b: Option<&[f64]>,
    norm: NormTag,
) -> Result<(f64, Vec<f64>)> {
    let n = u.len();
    if a.cols() != n || a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "point of dimension {n} against a {}x{} system with {} right-hand sides",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let equalities = match (eq_a, eq_b) {
        (Some(ea), Some(eb)) => {
            if ea.cols() != n || ea.rows() != eb.len() {
                return Err(Error::DimensionMismatch(
                    "equality block does not match the point".into(),
                ));
            }
            Some((ea, eb))
        }
        (None, None) => None,
        _ => {
            return Err(Error::InvalidInput(
                "equality matrix and right-hand side must be given together".into(),
            ))
        }
    };
    if !norm.is_polyhedral() {
        return Err(Error::UnsupportedNorms {
            domain: norm,
            codomain: norm,
            context: "polyhedral distance LP",
        });
    }

    // x = u + d, so A d ≤ b − A u and the objective is ‖d‖.
    let mut lp = LpBuilder::new();
    let d = lp.add_vars(n, None, None, 0.0);
    let add_block = |lp: &mut LpBuilder, m: &Matrix, rhs: &[f64], rel: Relation| {
        let mu = m.mul_vec(u);
        for i in 0..m.rows() {
            let terms = (0..n)
                .filter(|&k| m[(i, k)] != 0.0)
                .map(|k| (d + k, m[(i, k)]))
                .collect();
            lp.add_row(terms, rel, rhs[i] - mu[i]);
        }
    };
    add_block(&mut lp, a, b, Relation::Le);
    if let Some((ea, eb)) = equalities {
        add_block(&mut lp, ea, eb, Relation::Eq);
    }
    match norm {
        NormTag::L1 => {
            // d = p − q with p, q ≥ 0 and cost Σ(p + q)
            for k in 0..n {
                let p = lp.add_var(Some(0.0), None, 1.0);
                let q = lp.add_var(Some(0.0), None, 1.0);
                lp.add_row(vec![(d + k, 1.0), (p, -1.0), (q, 1.0)], Relation::Eq, 0.0);
            }
        }
        NormTag::LInf => {
            let t = lp.add_var(Some(0.0), None, 1.0);
            for k in 0..n {
                lp.add_row(vec![(d + k, 1.0), (t, -1.0)], Relation::Le, 0.0);
                lp.add_row(vec![(d + k, 1.0), (t, 1.0)], Relation::Ge, 0.0);
            }
        }
        NormTag::L2 => unreachable!(),
    }
    let out = lp.solve()?;
    match out.status {
        LpStatus::Optimal => {
            let x = (0..n).map(|k| u[k] + out.primal[d + k]).collect();
            Ok((out.value.max(0.0), x))
        }
        LpStatus::Infeasible => Err(Error::EmptyPolyhedron),
        LpStatus::Unbounded => Err(super::LpError::UnexpectedStatus(LpStatus::Unbounded).into()),
    }
}

/// `min ‖x‖` subject to `A_J x ≤ y_J`; `y` has one entry per row of `A` and
/// entries outside `J` are ignored.
pub fn min_norm_solution(a: &Matrix, j: &IndexSet, y: &[f64], norm: NormTag) -> Result<(f64, Vec<f64>)> {
    check_universe(j, a.rows(), "matrix rows")?;
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries for {} rows",
            y.len(),
            a.rows()
        )));
    }
    let a_j = a.submatrix_rows(j)?;
    let y_j: Vec<f64> = j.iter().map(|i| y[i]).collect();
    distance_to_polyhedron(&vec![0.0; a.cols()], &a_j, &y_j, None, None, norm)
}
