//! JSON documents written and read by the CLI.

use hoffman_core::ellipsoid::L2Bracket;
use hoffman_core::{DikinBounds, HoffmanReport, LedgerDocument, NormConfig, TightWitness};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub b: Vec<f64>,
    pub u: Vec<f64>,
    pub ratio: f64,
    pub attaining: Vec<usize>,
}

impl From<&TightWitness> for WitnessDocument {
    fn from(w: &TightWitness) -> Self {
        Self {
            b: w.b.clone(),
            u: w.u.clone(),
            ratio: w.ratio,
            attaining: w.attaining.to_one_based(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub variant: String,
    pub norms: NormConfig,
    #[serde(rename = "H")]
    pub h: f64,
    /// `1 / H`; `null` when `H = 0`.
    #[serde(rename = "inverse_H")]
    pub inverse_h: Option<f64>,
    pub probes: usize,
    /// Row set of a restricted computation, one-based.
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<usize>>,
    pub ledger: LedgerDocument,
    /// Present only when a witness was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessField>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessField {
    Found(WitnessDocument),
    /// Why no witness exists, e.g. `H = 0`.
    NotApplicable(String),
}

impl ReportDocument {
    pub fn new(report: &HoffmanReport, witness: Option<WitnessField>) -> Self {
        let inv = report.inverse_h();
        Self {
            schema: SCHEMA,
            variant: report.variant.name().to_owned(),
            norms: report.norms,
            h: report.h,
            inverse_h: inv.is_finite().then_some(inv),
            probes: report.ledger.probes(),
            l: None,
            ledger: report.ledger.to_document(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsDocument {
    pub schema: u32,
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
    pub factor: f64,
    pub p: usize,
}

impl From<DikinBounds> for BoundsDocument {
    fn from(b: DikinBounds) -> Self {
        Self {
            schema: SCHEMA,
            sigma: b.sigma,
            lower: b.lower,
            upper: b.upper,
            factor: b.factor,
            p: b.p,
        }
    }
}

/// Result of `estimate-l2` without `--J`: a bracket on `H` itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketDocument {
    pub schema: u32,
    #[serde(rename = "H_lower")]
    pub h_lower: f64,
    #[serde(rename = "H_upper")]
    pub h_upper: f64,
    pub ledger: LedgerDocument,
}

impl From<&L2Bracket> for BracketDocument {
    fn from(b: &L2Bracket) -> Self {
        Self {
            schema: SCHEMA,
            h_lower: b.h_lower,
            h_upper: b.h_upper,
            ledger: b.ledger.to_document(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionFailure {
    pub schema: u32,
    pub relatively_surjective: bool,
    pub certificate: Vec<usize>,
}
