use std::fs;
use std::io::Write;
use std::path::Path;

use hoffman_core::ellipsoid::dikin_bounds;
use hoffman_core::polylp::{
    facial_value, min_conic_image_norm, min_relsurj_detect, min_relsurj_value,
    restricted_conic_value, NormalizedBlock,
};
use hoffman_core::{
    bracket_hoffman_l2, compute as compute_report, tight_witness, verify_joint_certificates,
    CertificateLedger, Error, IndexSet, LedgerDocument, Matrix, NormConfig, ProblemSpec,
    SurjectivityOutcome, Variant,
};
use serde::Serialize;

use crate::matrix_io::read_matrix;
use crate::report::{
    BoundsDocument, BracketDocument, DetectionFailure, ReportDocument, WitnessDocument,
    WitnessField, SCHEMA,
};
use crate::{parse_algo, parse_index_list, parse_norm, CliError, ComputeArgs, EstimateArgs, VerifyArgs};

/// Relative tolerance when re-deriving stored per-certificate values.
pub const REPROBE_TOL: f64 = 1e-7;

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parse_variant(s: &str) -> Result<Variant, CliError> {
    s.parse().map_err(|e: Error| CliError::io(e.to_string()))
}

fn read_opt(path: Option<&Path>) -> Result<Option<Matrix>, CliError> {
    path.map(read_matrix).transpose()
}

// An omitted block becomes an empty matrix with the other block's width.
fn read_pair(a: Option<&Path>, c: Option<&Path>) -> Result<(Matrix, Matrix), CliError> {
    match (read_opt(a)?, read_opt(c)?) {
        (Some(a), Some(c)) => Ok((a, c)),
        (Some(a), None) => {
            let n = a.cols();
            Ok((a, Matrix::zeros(0, n)))
        }
        (None, Some(c)) => Ok((Matrix::zeros(0, c.cols()), c)),
        (None, None) => Err(CliError::io("at least one of --A and --C is required")),
    }
}

fn norms_for(variant: Variant, dom: Option<&str>, cod: Option<&str>) -> Result<NormConfig, CliError> {
    let mut cfg = variant.default_norms();
    if let Some(d) = dom {
        cfg.domain = parse_norm(d)?;
    }
    if let Some(c) = cod {
        cfg.codomain = parse_norm(c)?;
    }
    if !cfg.is_exact() {
        return Err(CliError::new(
            CliError::NORMS,
            format!("norm pair {cfg} has no exact path; use estimate-l2 for Euclidean norms"),
        ));
    }
    Ok(cfg)
}

pub fn compute(args: &ComputeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let variant = parse_variant(&args.variant)?;
    let norms = norms_for(variant, args.norm_dom.as_deref(), args.norm_cod.as_deref())?;
    let algo = parse_algo(&args.algo)?;
    let (a, c) = if variant.needs_c() {
        let (a, c) = read_pair(args.a.as_deref(), args.c.as_deref())?;
        (a, Some(c))
    } else {
        let a = read_opt(args.a.as_deref())?
            .ok_or_else(|| CliError::io(format!("variant {variant} needs --A")))?;
        (a, None)
    };
    let l = match (&args.l, variant) {
        (Some(list), _) => Some(parse_index_list(list, a.rows())?),
        (None, Variant::RestrictedL) => return Err(CliError::io("variant restricted needs --L")),
        (None, _) => None,
    };
    let spec = ProblemSpec {
        variant,
        a,
        c,
        l: l.clone(),
        norms,
    };
    let report = compute_report(&spec, algo)?;
    let witness = args.witness.then(|| witness_field(&spec.a, &report, norms));
    let mut doc = ReportDocument::new(&report, witness.transpose()?);
    doc.l = l.map(|l| l.to_one_based());
    emit(out, &doc)
}

fn witness_field(
    a: &Matrix,
    report: &hoffman_core::HoffmanReport,
    norms: NormConfig,
) -> Result<WitnessField, CliError> {
    if report.variant != Variant::InequalitiesOnly {
        return Ok(WitnessField::NotApplicable(format!(
            "witnesses are built for variant ineq only, not {}",
            report.variant
        )));
    }
    match tight_witness(a, report, norms) {
        Ok(Some(w)) => Ok(WitnessField::Found(WitnessDocument::from(&w))),
        Ok(None) => Ok(WitnessField::NotApplicable("H = 0, no attaining pair exists".into())),
        Err(e @ (Error::UnsupportedNorms { .. } | Error::TooLarge { .. })) => {
            Ok(WitnessField::NotApplicable(e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn estimate_l2(args: &EstimateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (a, c) = read_pair(args.a.as_deref(), args.c.as_deref())?;
    if a.cols() != c.cols() {
        return Err(CliError::io(format!(
            "A has {} columns but C has {}",
            a.cols(),
            c.cols()
        )));
    }
    let Some(list) = &args.j else {
        let bracket = bracket_hoffman_l2(&a, &c)?;
        return emit(out, &BracketDocument::from(&bracket));
    };
    let j = parse_index_list(list, c.rows())?;
    let detect = min_relsurj_detect(&a, &c, &j)?;
    if !detect.surjective {
        let cert = detect.support.to_one_based();
        emit(
            out,
            &DetectionFailure {
                schema: SCHEMA,
                relatively_surjective: false,
                certificate: cert.clone(),
            },
        )?;
        return Err(CliError::new(
            CliError::DETECTION,
            format!("J is not relatively surjective, certificate {cert:?}"),
        ));
    }
    match dikin_bounds(&a, &c, &j) {
        Ok(b) => emit(out, &BoundsDocument::from(b)),
        // The image is {0}: the constant of this set is 0.
        Err(Error::TrivialImage) => emit(
            out,
            &serde_json::json!({ "schema": SCHEMA, "trivial_image": true, "H_J": 0.0 }),
        ),
        Err(e) => Err(e.into()),
    }
}

/// What a ledger's sets are probed against.
struct Instance {
    variant: Variant,
    a: Matrix,
    c: Matrix,
    l: Option<IndexSet>,
}

impl Instance {
    fn universe(&self) -> usize {
        match self.variant {
            Variant::InequalitiesOnly | Variant::RestrictedL => self.a.rows(),
            Variant::Mixed | Variant::MixedEasyIneq | Variant::MixedEasyEq => self.c.rows(),
            Variant::FacialDistance => self.a.cols(),
        }
    }

    fn probe(&self, j: &IndexSet, cfg: NormConfig) -> hoffman_core::Result<SurjectivityOutcome> {
        match self.variant {
            Variant::InequalitiesOnly | Variant::RestrictedL => min_conic_image_norm(&self.a, j, cfg),
            Variant::Mixed | Variant::MixedEasyIneq | Variant::MixedEasyEq => {
                min_relsurj_detect(&self.a, &self.c, j)
            }
            Variant::FacialDistance => {
                let n = self.a.cols();
                let ones = Matrix::from_row_major(1, n, vec![1.0; n])?;
                min_relsurj_detect(&self.a.vstack(&ones)?, &Matrix::identity(n).scaled(-1.0), j)
            }
        }
    }

    fn value(&self, j: &IndexSet, cfg: NormConfig) -> hoffman_core::Result<f64> {
        let block = match self.variant {
            Variant::MixedEasyIneq => NormalizedBlock::Equations,
            Variant::MixedEasyEq => NormalizedBlock::Inequalities,
            _ => NormalizedBlock::Both,
        };
        Ok(match self.variant {
            Variant::InequalitiesOnly => min_conic_image_norm(&self.a, j, cfg)?.hoffman_value(),
            Variant::RestrictedL => {
                let l = self.l.as_ref().ok_or_else(|| {
                    Error::InvalidInput("restricted ledger without its row set L".into())
                })?;
                let v = restricted_conic_value(&self.a, j, l, cfg)?;
                if v.is_infinite() {
                    0.0
                } else {
                    1.0 / v
                }
            }
            Variant::Mixed | Variant::MixedEasyIneq | Variant::MixedEasyEq => {
                min_relsurj_value(&self.a, &self.c, j, cfg, block)?.hoffman_value()
            }
            Variant::FacialDistance => facial_value(&self.a, j, cfg)?.hoffman_value(),
        })
    }
}

#[derive(Serialize)]
struct VerifyOutcome {
    schema: u32,
    m: usize,
    cover: bool,
    reprobed: bool,
    values_checked: bool,
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.ledger)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", args.ledger.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let (doc, report) = if value.get("ledger").is_some() {
        let r: ReportDocument = serde_json::from_value(value)?;
        (r.ledger.clone(), Some(r))
    } else {
        (serde_json::from_value::<LedgerDocument>(value)?, None)
    };
    let variant = match (&report, &args.variant) {
        (Some(r), _) => parse_variant(&r.variant)?,
        (None, Some(v)) => parse_variant(v)?,
        (None, None) => Variant::InequalitiesOnly,
    };
    let ledger = doc.to_ledger()?;
    let m = ledger.m();
    let vacuous = m == 0 && ledger.surjective().is_empty() && ledger.nonsurjective().is_empty();
    let cover = vacuous || verify_joint_certificates(ledger.surjective(), ledger.nonsurjective(), m)?;
    if !cover {
        return Err(CliError::verify("F and I do not cover every index set"));
    }

    let mut reprobed = false;
    let mut values_checked = false;
    if args.a.is_some() || args.c.is_some() {
        let (a, c) = read_pair(args.a.as_deref(), args.c.as_deref())?;
        let l = match report.as_ref().and_then(|r| r.l.as_ref()) {
            Some(list) => Some(
                IndexSet::from_one_based(a.rows(), list)
                    .map_err(|e| CliError::verify(format!("stale ledger: {e}")))?,
            ),
            None => None,
        };
        let inst = Instance { variant, a, c, l };
        if inst.universe() != m {
            return Err(CliError::verify(format!(
                "stale ledger: it indexes {m} sets but the matrices give {}",
                inst.universe()
            )));
        }
        let cfg = report.as_ref().map_or(variant.default_norms(), |r| r.norms);
        reprobe(&inst, &ledger, cfg)?;
        reprobed = true;
        if let Some(r) = &report {
            check_values(&inst, &ledger, r, cfg)?;
            values_checked = true;
        }
    }
    emit(
        out,
        &VerifyOutcome {
            schema: SCHEMA,
            m,
            cover,
            reprobed,
            values_checked,
        },
    )
}

fn reprobe(inst: &Instance, ledger: &CertificateLedger, cfg: NormConfig) -> Result<(), CliError> {
    for f in ledger.surjective() {
        if !inst.probe(f, cfg)?.surjective {
            return Err(CliError::verify(format!("stale ledger: F member {f} is not surjective")));
        }
    }
    for i in ledger.nonsurjective() {
        if inst.probe(i, cfg)?.surjective {
            return Err(CliError::verify(format!("stale ledger: I member {i} is surjective")));
        }
    }
    Ok(())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REPROBE_TOL * a.abs().max(b.abs()).max(1.0)
}

fn check_values(
    inst: &Instance,
    ledger: &CertificateLedger,
    report: &ReportDocument,
    cfg: NormConfig,
) -> Result<(), CliError> {
    let mut best: f64 = 0.0;
    for f in ledger.surjective() {
        let v = inst.value(f, cfg)?;
        if let Some(&stored) = ledger.per_f_values().get(f) {
            if !close(v, stored) {
                return Err(CliError::verify(format!(
                    "stale ledger: value of {f} is {v}, stored {stored}"
                )));
            }
        }
        best = best.max(v);
    }
    if !close(best, report.h) {
        return Err(CliError::verify(format!("stale ledger: H is {best}, stored {}", report.h)));
    }
    Ok(())
}
