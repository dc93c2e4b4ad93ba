use super::{HoffmanReport, NormConfig, Variant};
use crate::certkit::IndexSet;
use crate::error::{Error, Result};
use crate::linalg::{norm, Matrix, NormTag};
use crate::polylp::{distance_to_polyhedron, min_norm_solution};

/// Largest attaining set whose sign vertices are enumerated.
pub const MAX_WITNESS_SET: usize = 16;

/// A right-hand side `b` and point `u` attaining the Hoffman bound:
/// `ratio = dist(u, {x : A x ≤ b}) / ‖(A u − b)₊‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct TightWitness {
    pub b: Vec<f64>,
    pub u: Vec<f64>,
    pub ratio: f64,
    /// The certificate set whose value attains `H`.
    pub attaining: IndexSet,
}

/// Builds `(b, u)` for which the bound of an inequality system holds with
/// equality. Returns `Ok(None)` when `H = 0`, where no such pair exists.
///
/// Take the lexicographically smallest `F` attaining `H`. The worst
/// right-hand side for `A_F x ≤ y` over the unit ℓ∞ ball sits at a vertex
/// (the inner minimum is convex in `y`), so all `2^|F|` vertices are tried.
/// Rows outside `F` get a right-hand side large enough never to bind near
/// the nearest point, and `u = 0`.
pub fn tight_witness(a: &Matrix, report: &HoffmanReport, cfg: NormConfig) -> Result<Option<TightWitness>> {
    if report.variant != Variant::InequalitiesOnly {
        return Err(Error::InvalidInput(format!(
            "tight witnesses are built for inequality systems only, not {}",
            report.variant
        )));
    }
    if cfg.codomain != NormTag::LInf || !cfg.domain.is_polyhedral() {
        return Err(cfg.unsupported("tight witness construction"));
    }
    let h = report.h;
    if !(h > 0.0) {
        return Ok(None);
    }
    let m = a.rows();
    let f = report
        .per_f_values()
        .iter()
        .find(|(_, &v)| (v - h).abs() <= 1e-9 * h)
        .map(|(s, _)| s.clone())
        .expect("H is attained by some certificate");
    if f.len() > MAX_WITNESS_SET {
        return Err(Error::TooLarge {
            what: "attaining certificate set",
            size: f.len(),
            limit: MAX_WITNESS_SET,
        });
    }

    let members = f.members();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1u32 << members.len()) {
        let mut y = vec![0.0; m];
        for (k, &i) in members.iter().enumerate() {
            y[i] = if mask >> k & 1 == 1 { 1.0 } else { -1.0 };
        }
        let (value, _) = min_norm_solution(a, &f, &y, cfg.domain)?;
        if best.as_ref().map_or(true, |b| value > b.0) {
            best = Some((value, y));
        }
    }
    let (_, y_star) = best.expect("at least one vertex");

    let big = (1.0 + a.max_row_norm(cfg.domain.dual())) * (h + 1.0) * norm(&y_star, NormTag::LInf).max(1.0);
    let b: Vec<f64> = (0..m)
        .map(|i| if f.contains(i) { y_star[i] } else { big })
        .collect();
    let u = vec![0.0; a.cols()];
    let (dist, _) = distance_to_polyhedron(&u, a, &b, None, None, cfg.domain)?;
    let residual = norm(
        &b.iter().map(|bi| (-bi).max(0.0)).collect::<Vec<_>>(),
        cfg.codomain,
    );
    Ok(Some(TightWitness {
        b,
        u,
        ratio: dist / residual,
        attaining: f,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certkit::Algorithm;
    use crate::engine::hoffman_inequalities;

    const LINF: NormConfig = NormConfig::new(NormTag::LInf, NormTag::LInf);

    #[test]
    fn worked_matrix_witness() {
        let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]);
        let r = hoffman_inequalities(&a, LINF, Algorithm::Worklist).unwrap();
        let w = tight_witness(&a, &r, LINF).unwrap().unwrap();
        assert_eq!(w.attaining, IndexSet::from_one_based(3, &[1, 3]).unwrap());
        assert_eq!(w.b[0], -1.0);
        assert_eq!(w.b[2], -1.0);
        assert!(w.b[1] > 2.0);
        assert!((w.ratio - 2.0).abs() < 1e-9);
    }

    #[test]
    fn identity_witness() {
        let a = Matrix::identity(2);
        let r = hoffman_inequalities(&a, LINF, Algorithm::Worklist).unwrap();
        let w = tight_witness(&a, &r, LINF).unwrap().unwrap();
        assert_eq!(w.b, vec![-1.0, -1.0]);
        assert!((w.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_witness_for_zero_constant() {
        let a = Matrix::zeros(1, 2);
        let r = hoffman_inequalities(&a, LINF, Algorithm::Worklist).unwrap();
        assert_eq!(tight_witness(&a, &r, LINF).unwrap(), None);
    }
}
