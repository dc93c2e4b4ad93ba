//! Hoffman constants for the six supported system shapes.
//!
//! Each computation pairs a probe (does the index set `J` give a
//! (relatively) surjective mapping?) with a per-set value, and hands both to
//! the certificate search in [`crate::certkit`].

mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::certkit::{algorithm1_run, algorithm2_run, Algorithm, CertificateLedger, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, NormTag};
use crate::polylp::{
    facial_value, min_conic_image_norm, min_relsurj_detect, min_relsurj_value,
    restricted_conic_value, NormalizedBlock, SurjectivityOutcome,
};

pub use crate::polylp::NormConfig;
pub use witness::{tight_witness, TightWitness, MAX_WITNESS_SET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `A x ≤ b`.
    InequalitiesOnly,
    /// `A x ≤ b` where the rows outside `L` are easy to satisfy.
    RestrictedL,
    /// `A x = b, C x ≤ d`.
    Mixed,
    /// `A x = b, C x ≤ d` with the inequalities easy.
    MixedEasyIneq,
    /// `A x = b, C x ≤ d` with the equations easy.
    MixedEasyEq,
    /// Distance to the solution set of `A x = v` over the simplex.
    FacialDistance,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::InequalitiesOnly,
        Variant::RestrictedL,
        Variant::Mixed,
        Variant::MixedEasyIneq,
        Variant::MixedEasyEq,
        Variant::FacialDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::InequalitiesOnly => "ineq",
            Variant::RestrictedL => "restricted",
            Variant::Mixed => "mixed",
            Variant::MixedEasyIneq => "mixed-easy-ineq",
            Variant::MixedEasyEq => "mixed-easy-eq",
            Variant::FacialDistance => "facial",
        }
    }

    /// Norms used when the caller does not choose any: the cheapest pair for
    /// which the variant has an exact LP path.
    pub fn default_norms(self) -> NormConfig {
        match self {
            Variant::InequalitiesOnly | Variant::RestrictedL => {
                NormConfig::new(NormTag::LInf, NormTag::LInf)
            }
            Variant::Mixed | Variant::MixedEasyIneq | Variant::MixedEasyEq => {
                NormConfig::new(NormTag::LInf, NormTag::L1)
            }
            Variant::FacialDistance => NormConfig::new(NormTag::L1, NormTag::L1),
        }
    }

    pub fn needs_c(self) -> bool {
        matches!(
            self,
            Variant::Mixed | Variant::MixedEasyIneq | Variant::MixedEasyEq
        )
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variant `{s}`")))
    }
}

/// A full problem description, as read from the command line or a test.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub variant: Variant,
    pub a: Matrix,
    pub c: Option<Matrix>,
    pub l: Option<IndexSet>,
    pub norms: NormConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoffmanReport {
    pub variant: Variant,
    pub h: f64,
    pub ledger: CertificateLedger,
    pub norms: NormConfig,
    pub witness: Option<TightWitness>,
}

impl HoffmanReport {
    pub fn per_f_values(&self) -> &BTreeMap<IndexSet, f64> {
        self.ledger.per_f_values()
    }

    /// `1 / H`, e.g. the facial distance itself; `+∞` when `H = 0`.
    pub fn inverse_h(&self) -> f64 {
        if self.h > 0.0 {
            1.0 / self.h
        } else {
            f64::INFINITY
        }
    }
}

fn run_search<P, V>(m: usize, algo: Algorithm, probe: P, value_of: V) -> Result<CertificateLedger>
where
    P: FnMut(&IndexSet) -> Result<SurjectivityOutcome>,
    V: FnMut(&IndexSet, &SurjectivityOutcome) -> Result<f64>,
{
    match algo {
        Algorithm::Worklist => algorithm1_run(m, probe, value_of),
        Algorithm::CoverGap => algorithm2_run(m, probe, value_of),
    }
}

fn report(variant: Variant, ledger: CertificateLedger, norms: NormConfig) -> HoffmanReport {
    HoffmanReport {
        variant,
        h: ledger.best_h(),
        ledger,
        norms,
        witness: None,
    }
}

fn require_exact(cfg: NormConfig, context: &'static str) -> Result<()> {
    if cfg.is_exact() {
        Ok(())
    } else {
        Err(cfg.unsupported(context))
    }
}

/// Hoffman constant of `A x ≤ b`.
pub fn hoffman_inequalities(a: &Matrix, cfg: NormConfig, algo: Algorithm) -> Result<HoffmanReport> {
    require_exact(cfg, "exact inequality computation")?;
    let ledger = run_search(
        a.rows(),
        algo,
        |j: &IndexSet| min_conic_image_norm(a, j, cfg),
        |_: &IndexSet, out: &SurjectivityOutcome| Ok(out.hoffman_value()),
    )?;
    Ok(report(Variant::InequalitiesOnly, ledger, cfg))
}

/// Hoffman constant of `A x ≤ b` relative to the rows in `L`, the remaining
/// rows being easy to satisfy.
pub fn hoffman_restricted(
    a: &Matrix,
    l: &IndexSet,
    cfg: NormConfig,
    algo: Algorithm,
) -> Result<HoffmanReport> {
    require_exact(cfg, "exact restricted computation")?;
    if l.universe() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "L is a subset of {} rows but A has {}",
            l.universe(),
            a.rows()
        )));
    }
    let ledger = run_search(
        a.rows(),
        algo,
        |j: &IndexSet| min_conic_image_norm(a, j, cfg),
        |j: &IndexSet, _: &SurjectivityOutcome| {
            let value = restricted_conic_value(a, j, l, cfg)?;
            Ok(if value.is_infinite() { 0.0 } else { 1.0 / value })
        },
    )?;
    Ok(report(Variant::RestrictedL, ledger, cfg))
}

fn mixed_family(
    variant: Variant,
    a: &Matrix,
    c: &Matrix,
    cfg: NormConfig,
    algo: Algorithm,
    block: NormalizedBlock,
) -> Result<HoffmanReport> {
    require_exact(cfg, "exact mixed-system computation")?;
    if a.cols() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} columns but C has {}",
            a.cols(),
            c.cols()
        )));
    }
    let ledger = run_search(
        c.rows(),
        algo,
        |j: &IndexSet| min_relsurj_detect(a, c, j),
        |j: &IndexSet, _: &SurjectivityOutcome| {
            Ok(min_relsurj_value(a, c, j, cfg, block)?.hoffman_value())
        },
    )?;
    Ok(report(variant, ledger, cfg))
}

/// Hoffman constant of `A x = b, C x ≤ d`. The codomain norm is the norm on
/// the product space and must be ℓ1.
pub fn hoffman_mixed(a: &Matrix, c: &Matrix, cfg: NormConfig, algo: Algorithm) -> Result<HoffmanReport> {
    mixed_family(Variant::Mixed, a, c, cfg, algo, NormalizedBlock::Both)
}

/// As [`hoffman_mixed`] for points already satisfying `C x ≤ d`: only the
/// equation residual is measured.
pub fn hoffman_mixed_easy_inequalities(
    a: &Matrix,
    c: &Matrix,
    cfg: NormConfig,
    algo: Algorithm,
) -> Result<HoffmanReport> {
    mixed_family(
        Variant::MixedEasyIneq,
        a,
        c,
        cfg,
        algo,
        NormalizedBlock::Equations,
    )
}

/// As [`hoffman_mixed`] for points already satisfying `A x = b`: only the
/// inequality residual is measured. The codomain norm lives on `R^p`.
pub fn hoffman_mixed_easy_equations(
    a: &Matrix,
    c: &Matrix,
    cfg: NormConfig,
    algo: Algorithm,
) -> Result<HoffmanReport> {
    mixed_family(
        Variant::MixedEasyEq,
        a,
        c,
        cfg,
        algo,
        NormalizedBlock::Inequalities,
    )
}

/// Hoffman constant of `dist(x, Z(v)) ≤ H ‖A x − v‖` over the simplex,
/// `Z(v) = {z ∈ Δ : A z = v}`. Index sets range over the columns of `A`.
pub fn facial_distance(a: &Matrix, cfg: NormConfig, algo: Algorithm) -> Result<HoffmanReport> {
    require_exact(cfg, "exact facial distance computation")?;
    let n = a.cols();
    let ones = Matrix::from_row_major(1, n, vec![1.0; n])?;
    let a_tilde = a.vstack(&ones)?;
    let neg_identity = Matrix::identity(n).scaled(-1.0);
    let ledger = run_search(
        n,
        algo,
        |j: &IndexSet| min_relsurj_detect(&a_tilde, &neg_identity, j),
        |j: &IndexSet, _: &SurjectivityOutcome| Ok(facial_value(a, j, cfg)?.hoffman_value()),
    )?;
    Ok(report(Variant::FacialDistance, ledger, cfg))
}

/// Dispatches on the variant of `spec`.
pub fn compute(spec: &ProblemSpec, algo: Algorithm) -> Result<HoffmanReport> {
    let need_c = || {
        spec.c.as_ref().ok_or_else(|| {
            Error::InvalidInput(format!("variant {} needs an inequality block C", spec.variant))
        })
    };
    match spec.variant {
        Variant::InequalitiesOnly => hoffman_inequalities(&spec.a, spec.norms, algo),
        Variant::RestrictedL => {
            let l = spec.l.as_ref().ok_or_else(|| {
                Error::InvalidInput("variant restricted needs the row set L".into())
            })?;
            hoffman_restricted(&spec.a, l, spec.norms, algo)
        }
        Variant::Mixed => hoffman_mixed(&spec.a, need_c()?, spec.norms, algo),
        Variant::MixedEasyIneq => hoffman_mixed_easy_inequalities(&spec.a, need_c()?, spec.norms, algo),
        Variant::MixedEasyEq => hoffman_mixed_easy_equations(&spec.a, need_c()?, spec.norms, algo),
        Variant::FacialDistance => facial_distance(&spec.a, spec.norms, algo),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINF: NormConfig = NormConfig::new(NormTag::LInf, NormTag::LInf);

    fn three_rows() -> Matrix {
        Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])
    }

    fn sets(m: usize, lists: &[&[usize]]) -> Vec<IndexSet> {
        lists
            .iter()
            .map(|l| IndexSet::from_one_based(m, l).unwrap())
            .collect()
    }

    #[test]
    fn worked_matrix() {
        for algo in [Algorithm::Worklist, Algorithm::CoverGap] {
            let r = hoffman_inequalities(&three_rows(), LINF, algo).unwrap();
            assert!((r.h - 2.0).abs() < 1e-12);
            assert!(r.ledger.verify_cover().unwrap());
        }
        let r = hoffman_inequalities(&three_rows(), LINF, Algorithm::Worklist).unwrap();
        let mut f = r.ledger.surjective().to_vec();
        f.sort();
        assert_eq!(f, sets(3, &[&[1, 2], &[1, 3], &[2, 3]]));
        assert_eq!(r.ledger.nonsurjective(), sets(3, &[&[1, 2, 3]]).as_slice());
    }

    #[test]
    fn identity_and_plus_minus_one() {
        let r = hoffman_inequalities(&Matrix::identity(3), LINF, Algorithm::Worklist).unwrap();
        assert!((r.h - 1.0).abs() < 1e-12);
        assert_eq!(r.ledger.probes(), 1);

        let pm = Matrix::from_rows(&[[1.0], [-1.0]]);
        let r = hoffman_inequalities(&pm, LINF, Algorithm::Worklist).unwrap();
        assert!((r.h - 1.0).abs() < 1e-12);
        let mut f = r.ledger.surjective().to_vec();
        f.sort();
        assert_eq!(f, sets(2, &[&[1], &[2]]));
        assert_eq!(r.ledger.nonsurjective(), sets(2, &[&[1, 2]]).as_slice());
    }

    #[test]
    fn zero_row_gives_zero_constant() {
        let r = hoffman_inequalities(&Matrix::zeros(1, 2), LINF, Algorithm::Worklist).unwrap();
        assert_eq!(r.h, 0.0);
        assert_eq!(r.ledger.surjective(), &[IndexSet::empty(1)]);
    }

    #[test]
    fn euclidean_norms_are_rejected() {
        let cfg = NormConfig::new(NormTag::L2, NormTag::LInf);
        assert!(matches!(
            hoffman_inequalities(&three_rows(), cfg, Algorithm::Worklist),
            Err(Error::UnsupportedNorms { .. })
        ));
    }

    #[test]
    fn restricted_examples() {
        let pm = Matrix::from_rows(&[[1.0], [-1.0]]);
        let l = IndexSet::from_one_based(2, &[1]).unwrap();
        let r = hoffman_restricted(&pm, &l, LINF, Algorithm::Worklist).unwrap();
        assert!((r.h - 1.0).abs() < 1e-12);
        let r = hoffman_restricted(&pm, &IndexSet::empty(2), LINF, Algorithm::Worklist).unwrap();
        assert_eq!(r.h, 0.0);
    }

    #[test]
    fn mixed_examples() {
        let cfg = NormConfig::new(NormTag::LInf, NormTag::L1);
        let r = hoffman_mixed(&Matrix::from_rows(&[[1.0]]), &Matrix::zeros(0, 1), cfg, Algorithm::Worklist)
            .unwrap();
        assert!((r.h - 1.0).abs() < 1e-12);

        let c = Matrix::from_rows(&[[1.0], [-1.0]]);
        let r = hoffman_mixed(&Matrix::zeros(0, 1), &c, cfg, Algorithm::Worklist).unwrap();
        let mut f = r.ledger.surjective().to_vec();
        f.sort();
        assert_eq!(f, sets(2, &[&[1], &[2]]));
        assert!((r.h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn easy_equations_without_inequalities_is_zero() {
        let cfg = NormConfig::new(NormTag::LInf, NormTag::L1);
        let r = hoffman_mixed_easy_equations(
            &Matrix::from_rows(&[[1.0, 2.0]]),
            &Matrix::zeros(0, 2),
            cfg,
            Algorithm::Worklist,
        )
        .unwrap();
        assert_eq!(r.h, 0.0);
    }

    #[test]
    fn facial_distance_of_a_segment() {
        let cfg = NormConfig::new(NormTag::L1, NormTag::L1);
        let r = facial_distance(&Matrix::identity(2), cfg, Algorithm::Worklist).unwrap();
        assert!((r.h - 1.0).abs() < 1e-9, "H = {}", r.h);
        let r = facial_distance(&Matrix::from_rows(&[[3.0]]), cfg, Algorithm::Worklist).unwrap();
        assert_eq!(r.h, 0.0);
        assert!(r.inverse_h().is_infinite());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("bogus".parse::<Variant>().is_err());
    }
}
