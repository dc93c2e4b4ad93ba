mod common;

use common::{gaussian, rel_close};
use hoffman_core::linalg::{norm, positive_part};
use hoffman_core::polylp::distance_to_polyhedron;
use hoffman_core::{
    facial_distance, hoffman_inequalities, hoffman_mixed, hoffman_restricted, tight_witness,
    Algorithm, IndexSet, Matrix, NormConfig, NormTag, SplitMix64,
};
use proptest::prelude::*;

const PAIRS: [NormConfig; 4] = [
    NormConfig::new(NormTag::LInf, NormTag::LInf),
    NormConfig::new(NormTag::L1, NormTag::L1),
    NormConfig::new(NormTag::LInf, NormTag::L1),
    NormConfig::new(NormTag::L1, NormTag::LInf),
];
const LINF: NormConfig = PAIRS[0];

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn random_subset(rng: &mut SplitMix64, m: usize) -> IndexSet {
    IndexSet::from_mask(m, rng.next_u64() & ((1u64 << m) - 1))
}

// Right-hand side with a known feasible point: b = A x0 + s, s ≥ 0, with
// some slacks exactly zero so the nearest point often sits on a face.
fn feasible_rhs(rng: &mut SplitMix64, a: &Matrix) -> Vec<f64> {
    let x0 = rng.normal_vec(a.cols());
    a.mul_vec(&x0)
        .into_iter()
        .map(|v| if rng.next_below(2) == 0 { v } else { v + rng.next_f64() })
        .collect()
}

#[test]
fn worked_matrix_ledger() {
    let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]);
    for algo in [Algorithm::Worklist, Algorithm::CoverGap] {
        let r = hoffman_inequalities(&a, LINF, algo).unwrap();
        assert!((r.h - 2.0).abs() < 1e-12);
        let mut f: Vec<Vec<usize>> = r.ledger.surjective().iter().map(IndexSet::to_one_based).collect();
        f.sort();
        assert_eq!(f, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(r.ledger.nonsurjective(), &[IndexSet::full(3)]);
        let mut values: Vec<f64> = r.per_f_values().values().copied().collect();
        values.sort_by(f64::total_cmp);
        assert!((values[0] - 1.0).abs() < 1e-12 && (values[1] - 2.0).abs() < 1e-12 && (values[2] - 2.0).abs() < 1e-12);
    }
}

#[test]
fn witness_for_worked_matrix() {
    let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]);
    let r = hoffman_inequalities(&a, LINF, Algorithm::Worklist).unwrap();
    let w = tight_witness(&a, &r, LINF).unwrap().unwrap();
    assert_eq!(w.attaining.to_one_based(), vec![1, 3]);
    assert_eq!((w.b[0], w.b[2]), (-1.0, -1.0));
    assert!(w.b[1] > 2.0);
    assert_eq!(w.u, vec![0.0, 0.0]);
    assert!((w.ratio - 2.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hoffman_bound_holds_on_samples(seed in any::<u64>(), m in 1usize..6, n in 1usize..4, pair in 0usize..4) {
        let cfg = PAIRS[pair];
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let h = hoffman_inequalities(&a, cfg, Algorithm::Worklist).unwrap().h;
        for _ in 0..100 {
            let b = feasible_rhs(&mut rng, &a);
            let u: Vec<f64> = rng.normal_vec(n).iter().map(|x| 3.0 * x).collect();
            let (d, _) = distance_to_polyhedron(&u, &a, &b, None, None, cfg.domain).unwrap();
            let resid = norm(&positive_part(&sub(&a.mul_vec(&u), &b)), cfg.codomain);
            prop_assert!(d <= h * resid + 1e-8, "dist {} > {} · {}", d, h, resid);
        }
    }

    #[test]
    fn restricted_bound_holds_on_samples(seed in any::<u64>(), m in 1usize..6, n in 1usize..4) {
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let l = random_subset(&mut rng, m);
        let h = hoffman_restricted(&a, &l, LINF, Algorithm::Worklist).unwrap().h;
        for _ in 0..100 {
            let u: Vec<f64> = rng.normal_vec(n).iter().map(|x| 3.0 * x).collect();
            let au = a.mul_vec(&u);
            // u satisfies the rows outside L and x0 stays feasible.
            let b: Vec<f64> = feasible_rhs(&mut rng, &a)
                .into_iter()
                .enumerate()
                .map(|(i, v)| if l.contains(i) { v } else { v.max(au[i]) })
                .collect();
            let (d, _) = distance_to_polyhedron(&u, &a, &b, None, None, NormTag::LInf).unwrap();
            let resid = l.iter().map(|i| (au[i] - b[i]).max(0.0)).fold(0.0, f64::max);
            prop_assert!(d <= h * resid + 1e-8, "L = {}: dist {} > {} · {}", l, d, h, resid);
        }
    }

    #[test]
    fn restricted_is_monotone_in_l(seed in any::<u64>(), m in 1usize..7, n in 1usize..4) {
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let big = random_subset(&mut rng, m);
        let small = big.intersection(&random_subset(&mut rng, m));
        let h_small = hoffman_restricted(&a, &small, LINF, Algorithm::Worklist).unwrap().h;
        let h_big = hoffman_restricted(&a, &big, LINF, Algorithm::Worklist).unwrap().h;
        let h_full = hoffman_restricted(&a, &IndexSet::full(m), LINF, Algorithm::Worklist).unwrap().h;
        let h = hoffman_inequalities(&a, LINF, Algorithm::Worklist).unwrap().h;
        prop_assert!(h_small <= h_big + 1e-9);
        prop_assert!(h_big <= h_full + 1e-9);
        prop_assert!(rel_close(h_full, h, 1e-9));
        let h_empty = hoffman_restricted(&a, &IndexSet::empty(m), LINF, Algorithm::Worklist).unwrap().h;
        prop_assert_eq!(h_empty, 0.0);
    }

    #[test]
    fn scaling_law(seed in any::<u64>(), m in 1usize..6, n in 1usize..4, pair in 0usize..4) {
        let cfg = PAIRS[pair];
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let h = hoffman_inequalities(&a, cfg, Algorithm::Worklist).unwrap().h;
        for alpha in [0.5, 2.0, 10.0] {
            let ha = hoffman_inequalities(&a.scaled(alpha), cfg, Algorithm::Worklist).unwrap().h;
            prop_assert!(rel_close(ha, h / alpha, 1e-9), "alpha {}: {} vs {}", alpha, ha, h / alpha);
        }
    }

    // The ratio is recomputed here from (b, u) rather than trusted.
    #[test]
    fn witness_attains_h(seed in any::<u64>(), m in 1usize..7, n in 1usize..4, l1_domain in any::<bool>()) {
        let cfg = NormConfig::new(if l1_domain { NormTag::L1 } else { NormTag::LInf }, NormTag::LInf);
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let r = hoffman_inequalities(&a, cfg, Algorithm::Worklist).unwrap();
        let w = tight_witness(&a, &r, cfg).unwrap().unwrap();
        let (d, _) = distance_to_polyhedron(&w.u, &a, &w.b, None, None, cfg.domain).unwrap();
        let resid = norm(&positive_part(&sub(&a.mul_vec(&w.u), &w.b)), NormTag::LInf);
        let ratio = d / resid;
        prop_assert!(ratio >= r.h * (1.0 - 1e-6) && ratio <= r.h * (1.0 + 1e-6), "{} vs H = {}", ratio, r.h);
        prop_assert!(rel_close(w.ratio, ratio, 1e-9));
    }

    #[test]
    fn mixed_bound_holds_on_samples(seed in any::<u64>(), m in 0usize..3, p in 1usize..4, n in 1usize..4, pair in 0usize..4) {
        let cfg = PAIRS[pair];
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let c = gaussian(&mut rng, p, n);
        let h = hoffman_mixed(&a, &c, cfg, Algorithm::Worklist).unwrap().h;
        for _ in 0..60 {
            let x0 = rng.normal_vec(n);
            let b = a.mul_vec(&x0);
            let d_rhs: Vec<f64> = c.mul_vec(&x0).into_iter().map(|v| v + 0.5 * rng.next_f64()).collect();
            let u: Vec<f64> = rng.normal_vec(n).iter().map(|x| 3.0 * x).collect();
            let (d, _) = distance_to_polyhedron(&u, &c, &d_rhs, Some(&a), Some(&b), cfg.domain).unwrap();
            let mut resid = sub(&a.mul_vec(&u), &b);
            resid.extend(positive_part(&sub(&c.mul_vec(&u), &d_rhs)));
            let r = norm(&resid, cfg.codomain);
            prop_assert!(d <= h * r + 1e-8, "dist {} > {} · {}", d, h, r);
        }
    }

    // dist(x, Z(Ax')) ≤ H ‖A x − A x'‖ over the simplex, with the ℓ1 norm
    // on R^n as the facial setting requires.
    #[test]
    fn facial_bound_holds_on_samples(seed in any::<u64>(), m in 1usize..3, n in 1usize..5, linf in any::<bool>()) {
        let cfg = NormConfig::new(NormTag::L1, if linf { NormTag::LInf } else { NormTag::L1 });
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let h = facial_distance(&a, cfg, Algorithm::Worklist).unwrap().h;
        let simplex_point = |rng: &mut SplitMix64| {
            let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|t| t / s).collect::<Vec<f64>>()
        };
        let eq = a.vstack(&Matrix::from_row_major(1, n, vec![1.0; n]).unwrap()).unwrap();
        let neg = Matrix::identity(n).scaled(-1.0);
        for _ in 0..40 {
            let x = simplex_point(&mut rng);
            let target = simplex_point(&mut rng);
            let mut v = a.mul_vec(&target);
            let ax = a.mul_vec(&x);
            let gap = norm(&sub(&ax, &v), cfg.codomain);
            v.push(1.0);
            let (d, _) = distance_to_polyhedron(&x, &neg, &vec![0.0; n], Some(&eq), Some(&v), NormTag::L1).unwrap();
            prop_assert!(d <= h * gap + 1e-8, "dist {} > {} · {}", d, h, gap);
        }
    }
}
