//! Linear programming and the norm-minimization subproblems built on it.
//!
//! Every subproblem is an LP once the relevant norms are polyhedral: an ℓ1
//! objective splits into positive and negative parts, an ℓ∞ objective adds
//! one epigraph variable, and a unit-sphere constraint in the dual norm is
//! either linear (ℓ1 on a nonnegative vector) or handled by fixing one
//! coordinate at a time (ℓ∞).

mod builder;
mod distance;
mod simplex;
mod surjectivity;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certkit::IndexSet;
use crate::error::{Error, Result};
use crate::linalg::NormTag;

pub use builder::{LpBuilder, Relation};
pub use distance::{distance_to_polyhedron, min_norm_solution};
pub use simplex::{solve_lp, LpError, LpOutcome, LpProblem, LpStatus};
pub use surjectivity::{
    facial_value, min_conic_image_norm, min_relsurj_detect, min_relsurj_value,
    restricted_conic_value, NormalizedBlock,
};

/// Relative threshold below which an optimal value counts as zero.
pub const SURJ_TOL: f64 = 1e-9;

/// Norms on the domain `R^n` and on the codomain (`R^m`, or the product
/// space for mixed systems).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormConfig {
    pub domain: NormTag,
    pub codomain: NormTag,
}

impl NormConfig {
    pub const fn new(domain: NormTag, codomain: NormTag) -> Self {
        Self { domain, codomain }
    }

    /// Both norms polyhedral, so every subproblem is an LP.
    pub fn is_exact(&self) -> bool {
        self.domain.is_polyhedral() && self.codomain.is_polyhedral()
    }

    pub(crate) fn unsupported(&self, context: &'static str) -> Error {
        Error::UnsupportedNorms {
            domain: self.domain,
            codomain: self.codomain,
            context,
        }
    }
}

impl fmt::Display for NormConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.domain, self.codomain)
    }
}

/// Outcome of a (relative) surjectivity probe on an index set `J`.
///
/// `witness_v` is the minimizing dual vector laid out over the whole
/// universe (zeros outside `J`); for mixed systems it is `(v, z)` with `v`
/// in `R^m` and `z` in `R^p`. `support` holds the indices of `J` where the
/// witness is strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct SurjectivityOutcome {
    pub value: f64,
    pub witness_v: Vec<f64>,
    pub support: IndexSet,
    pub surjective: bool,
}

impl SurjectivityOutcome {
    /// The empty set: surjective by convention, value `+∞`.
    pub fn vacuous(universe: usize, witness_len: usize) -> Self {
        Self {
            value: f64::INFINITY,
            witness_v: vec![0.0; witness_len],
            support: IndexSet::empty(universe),
            surjective: true,
        }
    }

    /// `1 / value`, which is 0 for the `+∞` convention.
    pub fn hoffman_value(&self) -> f64 {
        if self.value.is_infinite() {
            0.0
        } else {
            1.0 / self.value
        }
    }
}

pub(crate) fn check_universe(set: &IndexSet, expected: usize, what: &str) -> Result<()> {
    if set.universe() != expected {
        return Err(Error::DimensionMismatch(format!(
            "index set over {} elements used with {what} of size {expected}",
            set.universe()
        )));
    }
    Ok(())
}

/// Adds variables and rows making the LP objective equal `‖g‖_tag`, where
/// `g_k` is the linear form `exprs[k]` in existing variables.
pub(crate) fn add_norm_objective(lp: &mut LpBuilder, exprs: Vec<Vec<(usize, f64)>>, tag: NormTag) {
    match tag {
        NormTag::L1 => {
            for mut terms in exprs {
                let p = lp.add_var(Some(0.0), None, 1.0);
                let q = lp.add_var(Some(0.0), None, 1.0);
                terms.push((p, -1.0));
                terms.push((q, 1.0));
                lp.add_row(terms, Relation::Eq, 0.0);
            }
        }
        NormTag::LInf => {
            let t = lp.add_var(Some(0.0), None, 1.0);
            for terms in exprs {
                let mut upper = terms.clone();
                upper.push((t, -1.0));
                lp.add_row(upper, Relation::Le, 0.0);
                let mut lower = terms;
                lower.push((t, 1.0));
                lp.add_row(lower, Relation::Ge, 0.0);
            }
        }
        NormTag::L2 => unreachable!("ℓ2 objectives are rejected before LP assembly"),
    }
}

/// Indices where `w` exceeds `SURJ_TOL` times its largest entry.
pub(crate) fn positive_support(universe: usize, w: &[f64], members: &[usize]) -> IndexSet {
    let top = members.iter().fold(0.0f64, |a, &i| a.max(w[i]));
    let picked = members
        .iter()
        .copied()
        .filter(|&i| top > 0.0 && w[i] > SURJ_TOL * top)
        .collect();
    IndexSet::new(universe, picked).expect("support drawn from a valid set")
}
