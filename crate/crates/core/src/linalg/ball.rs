use super::{nullspace_basis, Lu, Matrix, NormTag, SubspaceBasis};
use crate::error::{Error, Result};

/// Largest ambient dimension for which unit-ball vertices are enumerated.
pub const MAX_BALL_AMBIENT: usize = 20;

const VERTEX_TOL: f64 = 1e-9;

/// Vertices of `{u ∈ S : ‖u‖ ≤ 1}` for a polyhedral norm, where `S` is the
/// span of `basis`. Deduplicated, in a deterministic order.
///
/// For the full space these are `±e_i` (ℓ1) or the sign vectors (ℓ∞). For a
/// proper subspace an ℓ1 vertex is a support-minimal vector of `S`, found by
/// asking which coordinate slices of `S` are one-dimensional; an ℓ∞ vertex
/// has `dim S` linearly independent coordinates at `±1`.
pub fn unit_ball_vertices(basis: &SubspaceBasis, tag: NormTag) -> Result<Vec<Vec<f64>>> {
    let n = basis.ambient_dim();
    let d = basis.dim();
    if !tag.is_polyhedral() {
        return Err(Error::UnsupportedNorms {
            domain: tag,
            codomain: tag,
            context: "unit ball vertex enumeration",
        });
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let full = d == n;
    if n > MAX_BALL_AMBIENT && !(full && tag == NormTag::L1) {
        return Err(Error::TooLarge {
            what: "subspace dimension for unit ball vertices",
            size: n,
            limit: MAX_BALL_AMBIENT,
        });
    }
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut push = |u: Vec<f64>| {
        if !out
            .iter()
            .any(|w| w.iter().zip(&u).all(|(a, b)| (a - b).abs() <= VERTEX_TOL))
        {
            out.push(u);
        }
    };
    let q = basis.to_matrix();
    let sign = |mask: u64, k: usize| if mask >> k & 1 == 1 { -1.0 } else { 1.0 };
    match (tag, full) {
        (NormTag::L1, true) => {
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut u = vec![0.0; n];
                    u[i] = s;
                    push(u);
                }
            }
        }
        (_, true) => {
            for mask in 0u64..(1u64 << n) {
                push((0..n).map(|k| sign(mask, k)).collect());
            }
        }
        (NormTag::L1, false) => {
            // A slice with support inside T has dimension ≥ d − (n − |T|),
            // so only |T| ≤ n − d + 1 can give a single direction.
            for mask in 1u64..(1u64 << n) {
                if mask.count_ones() as usize > n - d + 1 {
                    continue;
                }
                let outside: Vec<Vec<f64>> = (0..n)
                    .filter(|i| mask >> i & 1 == 0)
                    .map(|i| q.row(i).to_vec())
                    .collect();
                let rows = Matrix::from_rows_with_cols(&outside, d)?;
                let slice = nullspace_basis(&rows, super::DEFAULT_RANK_TOL);
                if slice.dim() != 1 {
                    continue;
                }
                let u = q.mul_vec(&slice.vectors()[0]);
                if (0..n).any(|i| mask >> i & 1 == 1 && u[i].abs() <= VERTEX_TOL) {
                    continue;
                }
                let len: f64 = u.iter().map(|x| x.abs()).sum();
                push(u.iter().map(|x| x / len).collect());
                push(u.iter().map(|x| -x / len).collect());
            }
        }
        (_, false) => {
            for mask in 0u64..(1u64 << n) {
                if mask.count_ones() as usize != d {
                    continue;
                }
                let pinned: Vec<Vec<f64>> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| q.row(i).to_vec())
                    .collect();
                let sub = Matrix::from_rows_with_cols(&pinned, d)?;
                let Some(lu) = Lu::factor(&sub, 1e-12) else {
                    continue;
                };
                for signs in 0u64..(1u64 << d) {
                    let rhs: Vec<f64> = (0..d).map(|k| sign(signs, k)).collect();
                    let u = q.mul_vec(&lu.solve(&rhs));
                    if u.iter().all(|x| x.abs() <= 1.0 + VERTEX_TOL) {
                        push(u);
                    }
                }
            }
        }
    }
    Ok(out)
}
