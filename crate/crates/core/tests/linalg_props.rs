mod common;

use common::gaussian;
use hoffman_core::linalg::{
    colspace_basis, dot, least_squares_min_norm, norm, psd_sqrt_smallest_positive,
    smallest_positive_singular_value, Matrix, NormTag, SubspaceBasis, DEFAULT_RANK_TOL,
};
use hoffman_core::{IndexSet, SplitMix64};
use proptest::prelude::*;

const TAGS: [NormTag; 3] = [NormTag::L1, NormTag::L2, NormTag::LInf];

#[test]
fn norm_examples() {
    assert_eq!(norm(&[1.0, -2.0, 3.0], NormTag::LInf), 3.0);
    assert_eq!(norm(&[0.0, 0.0], NormTag::L1), 0.0);
    assert_eq!(norm(&[3.0, 4.0], NormTag::L2), 5.0);
    for t in TAGS {
        assert_eq!(t.dual().dual(), t);
    }
}

#[test]
fn colspace_examples() {
    assert_eq!(colspace_basis(&Matrix::identity(2), DEFAULT_RANK_TOL).dim(), 2);
    let line = colspace_basis(&Matrix::from_rows(&[[1.0], [1.0]]), DEFAULT_RANK_TOL);
    assert_eq!(line.dim(), 1);
    let v = &line.vectors()[0];
    let r = 0.5f64.sqrt();
    assert!((v[0].abs() - r).abs() < 1e-14 && (v[1] - v[0]).abs() < 1e-14);
    // det [[1,2],[2,4]] = 0 while the matrix is nonzero, so the rank is 1.
    let rank_one = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
    assert_eq!(colspace_basis(&rank_one, DEFAULT_RANK_TOL).dim(), 1);
    assert_eq!(colspace_basis(&Matrix::zeros(0, 0), DEFAULT_RANK_TOL).dim(), 0);
}

#[test]
fn projection_examples() {
    let s = colspace_basis(&Matrix::from_rows(&[[1.0], [0.0]]), DEFAULT_RANK_TOL);
    let p = s.project(&[1.0, 1.0]);
    assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
    let diag = colspace_basis(&Matrix::from_rows(&[[1.0], [1.0]]), DEFAULT_RANK_TOL);
    let p = diag.project(&[1.0, -1.0]);
    assert!(p.iter().all(|x| x.abs() < 1e-15));
    let p = diag.project(&[2.0, 2.0]);
    assert!((p[0] - 2.0).abs() < 1e-14 && (p[1] - 2.0).abs() < 1e-14);
}

#[test]
fn singular_value_examples() {
    let d = Matrix::from_diagonal(&[0.0, 4.0]);
    assert!((psd_sqrt_smallest_positive(&d, DEFAULT_RANK_TOL) - 2.0).abs() < 1e-14);
    let half = Matrix::from_rows(&[[0.5]]);
    assert!((psd_sqrt_smallest_positive(&half, DEFAULT_RANK_TOL) - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((smallest_positive_singular_value(&Matrix::identity(3), DEFAULT_RANK_TOL) - 1.0).abs() < 1e-14);
    assert_eq!(smallest_positive_singular_value(&Matrix::zeros(2, 2), DEFAULT_RANK_TOL), 0.0);
}

#[test]
fn submatrix_examples() {
    let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
    let j = IndexSet::from_one_based(3, &[1, 3]).unwrap();
    assert_eq!(m.submatrix_rows(&j).unwrap(), Matrix::from_rows(&[[1.0, 2.0], [5.0, 6.0]]));
    let e = m.submatrix_rows(&IndexSet::empty(3)).unwrap();
    assert_eq!((e.rows(), e.cols()), (0, 2));
    assert_eq!(m.submatrix_rows(&IndexSet::full(3)).unwrap(), m);
    assert!(m.submatrix_rows(&IndexSet::full(4)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dual_norm_inequality(seed in any::<u64>(), dim in 1usize..8) {
        let mut rng = SplitMix64::new(seed);
        let v = rng.normal_vec(dim);
        let w = rng.normal_vec(dim);
        for t in TAGS {
            prop_assert!(dot(&v, &w) <= norm(&v, t) * norm(&w, t.dual()) * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn projection_is_idempotent_and_nonexpansive(
        seed in any::<u64>(),
        rows in 1usize..7,
        cols in 0usize..5,
    ) {
        let mut rng = SplitMix64::new(seed);
        let m = gaussian(&mut rng, rows, cols);
        let s = colspace_basis(&m, DEFAULT_RANK_TOL);
        let v = rng.normal_vec(rows);
        let p = s.project(&v);
        let pp = s.project(&p);
        for (a, b) in p.iter().zip(&pp) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + norm(&v, NormTag::L2)));
        }
        prop_assert!(norm(&p, NormTag::L2) <= norm(&v, NormTag::L2) * (1.0 + 1e-12));
    }

    #[test]
    fn colspace_spans_the_columns(
        seed in any::<u64>(),
        rows in 1usize..7,
        inner in 1usize..4,
        cols in 1usize..6,
    ) {
        // Low-rank products exercise the rank cut.
        let mut rng = SplitMix64::new(seed);
        let m = gaussian(&mut rng, rows, inner).matmul(&gaussian(&mut rng, inner, cols));
        let s = colspace_basis(&m, DEFAULT_RANK_TOL);
        prop_assert!(s.dim() <= inner.min(rows).min(cols));
        for (a, va) in s.vectors().iter().enumerate() {
            prop_assert!((norm(va, NormTag::L2) - 1.0).abs() < 1e-12);
            for vb in &s.vectors()[a + 1..] {
                prop_assert!(dot(va, vb).abs() < 1e-12);
            }
        }
        let basis = s.to_matrix();
        for j in 0..cols {
            let col = m.col(j);
            let coef = least_squares_min_norm(&basis, &col, 1e-14);
            let fit = basis.mul_vec(&coef);
            let resid: f64 = fit.iter().zip(&col).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(resid <= 1e-10 * m.frobenius().max(1e-300));
        }
    }

    #[test]
    fn full_and_zero_subspaces(dim in 0usize..6) {
        prop_assert_eq!(SubspaceBasis::full(dim).dim(), dim);
        prop_assert_eq!(SubspaceBasis::zero(dim).dim(), 0);
    }
}
