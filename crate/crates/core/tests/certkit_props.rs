mod common;

use common::{gaussian, rel_close};
use hoffman_core::certkit::{solve_cover_gap, Algorithm1};
use hoffman_core::polylp::min_conic_image_norm;
use hoffman_core::{
    algorithm1_run, algorithm2_run, verify_joint_certificates, CertificateLedger, IndexSet,
    LedgerDocument, Matrix, NormConfig, NormTag, Result, SplitMix64, SurjectivityOutcome,
};
use hoffman_oracle::gordan_surjective;
use proptest::prelude::*;

const LINF: NormConfig = NormConfig::new(NormTag::LInf, NormTag::LInf);

// Every subset of {0..m} lies below some F or above some I.
fn brute_cover(f: &[IndexSet], i: &[IndexSet], m: usize) -> bool {
    (0u64..1 << m).all(|mask| {
        let j = IndexSet::from_mask(m, mask);
        f.iter().any(|s| j.is_subset_of(s)) || i.iter().any(|s| s.is_subset_of(&j))
    })
}

fn down_closure_size(worklist: &[IndexSet], m: usize) -> usize {
    (0u64..1 << m)
        .filter(|&mask| worklist.iter().any(|w| mask & !w.mask() == 0))
        .count()
}

// A monotone system on {0..m}: J is "surjective" iff it contains none of the
// forbidden sets. The certificate is the first forbidden set inside J.
fn synthetic(m: usize, forbidden: Vec<u64>) -> impl FnMut(&IndexSet) -> Result<SurjectivityOutcome> {
    move |j: &IndexSet| {
        let hit = forbidden.iter().find(|&&s| s & !j.mask() == 0);
        Ok(match hit {
            Some(&s) => SurjectivityOutcome {
                value: 0.0,
                witness_v: vec![0.0; m],
                support: IndexSet::from_mask(m, s),
                surjective: false,
            },
            None => SurjectivityOutcome {
                value: 1.0 + j.mask() as f64,
                witness_v: vec![0.0; m],
                support: IndexSet::empty(m),
                surjective: true,
            },
        })
    }
}

fn synthetic_value(j: &IndexSet, _: &SurjectivityOutcome) -> Result<f64> {
    // Any positive value strictly monotone under inclusion works.
    Ok(j.len() as f64 + 1.0 / (1.0 + j.mask() as f64))
}

fn lp_probe(a: &Matrix) -> impl FnMut(&IndexSet) -> Result<SurjectivityOutcome> + '_ {
    move |j: &IndexSet| min_conic_image_norm(a, j, LINF)
}

fn lp_value(_: &IndexSet, out: &SurjectivityOutcome) -> Result<f64> {
    Ok(out.hoffman_value())
}

fn forbidden_family(rng: &mut SplitMix64, m: usize) -> Vec<u64> {
    let count = rng.next_below(5) as usize;
    (0..count)
        .map(|_| {
            let mut s = 0u64;
            while s == 0 {
                s = rng.next_u64() & ((1u64 << m) - 1) & rng.next_u64();
            }
            s
        })
        .collect()
}

#[test]
fn verify_examples() {
    let m = 2;
    let f = vec![IndexSet::from_one_based(m, &[1]).unwrap(), IndexSet::from_one_based(m, &[2]).unwrap()];
    let i = vec![IndexSet::full(m)];
    assert!(verify_joint_certificates(&f, &i, m).unwrap());
    assert!(!verify_joint_certificates(&f[..1], &i, m).unwrap());
    assert!(verify_joint_certificates(&[], &[IndexSet::empty(0)], 0).unwrap());
    assert!(verify_joint_certificates(&[IndexSet::empty(0)], &[], 0).unwrap());
}

#[test]
fn pm_one_search() {
    let a = Matrix::from_rows(&[[1.0], [-1.0]]);
    for ledger in [
        algorithm1_run(2, lp_probe(&a), lp_value).unwrap(),
        algorithm2_run(2, lp_probe(&a), lp_value).unwrap(),
    ] {
        assert_eq!(ledger.nonsurjective(), &[IndexSet::full(2)]);
        let mut f = ledger.surjective().to_vec();
        f.sort();
        assert_eq!(f, vec![IndexSet::from_one_based(2, &[1]).unwrap(), IndexSet::from_one_based(2, &[2]).unwrap()]);
        assert!((ledger.best_h() - 1.0).abs() < 1e-12);
        assert!(ledger.verify_cover().unwrap());
    }
}

#[test]
fn identity_search_is_one_probe() {
    let ledger = algorithm1_run(3, lp_probe(&Matrix::identity(3)), lp_value).unwrap();
    assert_eq!(ledger.surjective(), &[IndexSet::full(3)]);
    assert!(ledger.nonsurjective().is_empty());
    assert_eq!(ledger.probes(), 1);
    assert!((ledger.best_h() - 1.0).abs() < 1e-12);
}

#[test]
fn document_round_trip() {
    let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]);
    let ledger = algorithm1_run(3, lp_probe(&a), lp_value).unwrap();
    let doc = ledger.to_document();
    let text = serde_json::to_string(&doc).unwrap();
    let back: LedgerDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    let rebuilt = back.to_ledger().unwrap();
    assert_eq!(rebuilt.surjective(), ledger.surjective());
    assert_eq!(rebuilt.nonsurjective(), ledger.nonsurjective());
    assert_eq!(rebuilt.best_h(), ledger.best_h());
    assert!(doc.surjective.iter().flatten().all(|&k| (1..=3).contains(&k)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verifier_matches_brute_force(seed in any::<u64>(), m in 0usize..9) {
        let mut rng = SplitMix64::new(seed);
        let pick = |rng: &mut SplitMix64| {
            let count = rng.next_below(4) as usize;
            (0..count)
                .map(|_| IndexSet::from_mask(m, rng.next_u64() & ((1u64 << m) - 1)))
                .collect::<Vec<_>>()
        };
        let f = pick(&mut rng);
        let i = pick(&mut rng);
        prop_assert_eq!(verify_joint_certificates(&f, &i, m).unwrap(), brute_cover(&f, &i, m));
        let gap = solve_cover_gap(&f, &i, m);
        prop_assert_eq!(gap.is_none(), brute_cover(&f, &i, m));
        if let Some(j) = gap {
            prop_assert!(!f.iter().any(|s| j.is_subset_of(s)));
            prop_assert!(!i.iter().any(|s| s.is_subset_of(&j)));
        }
    }

    // The down-closure of the worklist, ∪_{w ∈ W} 2^w, loses at least the
    // probed set at every step.
    #[test]
    fn worklist_down_closure_shrinks(seed in any::<u64>(), m in 1usize..11) {
        let mut rng = SplitMix64::new(seed);
        let mut probe = synthetic(m, forbidden_family(&mut rng, m));
        let mut value = synthetic_value;
        let mut alg = Algorithm1::new(m);
        let mut size = down_closure_size(alg.ledger().worklist(), m);
        let mut steps = 0;
        while alg.step(&mut probe, &mut value).unwrap() {
            let next = down_closure_size(alg.ledger().worklist(), m);
            prop_assert!(next < size, "measure {} -> {}", size, next);
            size = next;
            steps += 1;
        }
        prop_assert_eq!(size, 0);
        prop_assert!(steps <= 1 << m);
    }

    #[test]
    fn synthetic_searches_cover(seed in any::<u64>(), m in 0usize..13) {
        let mut rng = SplitMix64::new(seed);
        let forbidden = if m == 0 { Vec::new() } else { forbidden_family(&mut rng, m) };
        let l1 = algorithm1_run(m, synthetic(m, forbidden.clone()), synthetic_value).unwrap();
        let l2 = algorithm2_run(m, synthetic(m, forbidden.clone()), synthetic_value).unwrap();
        for l in [&l1, &l2] {
            prop_assert!(l.verify_cover().unwrap());
            prop_assert!(brute_cover(l.surjective(), l.nonsurjective(), m));
        }
        // The best value is attained on a maximal feasible set, which both
        // searches must probe.
        let best = (0u64..1 << m)
            .filter(|&mask| !forbidden.iter().any(|&s| s & !mask == 0))
            .map(|mask| synthetic_value(&IndexSet::from_mask(m, mask), &SurjectivityOutcome::vacuous(m, m)).unwrap())
            .fold(0.0, f64::max);
        prop_assert_eq!(l1.best_h(), best);
        prop_assert_eq!(l2.best_h(), best);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn both_algorithms_agree_on_lp_probes(seed in any::<u64>(), m in 1usize..11, n in 1usize..4) {
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(&mut rng, m, n);
        let l1 = algorithm1_run(m, lp_probe(&a), lp_value).unwrap();
        let l2 = algorithm2_run(m, lp_probe(&a), lp_value).unwrap();
        prop_assert!(rel_close(l1.best_h(), l2.best_h(), 1e-9), "{} vs {}", l1.best_h(), l2.best_h());
        prop_assert!(l1.verify_cover().unwrap() && l2.verify_cover().unwrap());
    }

    // Every certificate re-probes the same way under the independent
    // feasibility oracle, and with m ≤ 7 the whole lattice is checked.
    #[test]
    fn ledger_is_sound(seed in any::<u64>(), m in 1usize..8, n in 1usize..4, low_rank in any::<bool>()) {
        let mut rng = SplitMix64::new(seed);
        let a = if low_rank {
            gaussian(&mut rng, m, 1).matmul(&gaussian(&mut rng, 1, n))
        } else {
            gaussian(&mut rng, m, n)
        };
        let ledger: CertificateLedger = algorithm1_run(m, lp_probe(&a), lp_value).unwrap();
        for f in ledger.surjective() {
            prop_assert!(gordan_surjective(&a, f).unwrap(), "F = {}", f);
        }
        for i in ledger.nonsurjective() {
            prop_assert!(!gordan_surjective(&a, i).unwrap(), "I = {}", i);
        }
        for mask in 0u64..1 << m {
            let j = IndexSet::from_mask(m, mask);
            let below_f = ledger.surjective().iter().any(|f| j.is_subset_of(f));
            prop_assert_eq!(below_f, gordan_surjective(&a, &j).unwrap(), "J = {}", j);
        }
    }
}
