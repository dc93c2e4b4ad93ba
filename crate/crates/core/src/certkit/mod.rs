//! Certificate bookkeeping and the combinatorial search over row subsets.
//!
//! A surjective set `F` certifies every subset of itself; a non-surjective set
//! `I` certifies every superset of itself. The two collections together are
//! *joint certificates* once every subset of `{0..m}` lies below some `F` or
//! above some `I`, at which point the Hoffman constant is the largest of the
//! per-`F` values.

mod cover;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cover::{first_uncovered, solve_cover_gap, verify_joint_certificates, MAX_VERIFY_UNIVERSE};
pub use search::{algorithm1_run, algorithm2_run, Algorithm, Algorithm1};

/// A subset of `{0, .., universe - 1}` kept sorted and deduplicated.
///
/// Indices are zero-based in the API; [`fmt::Display`] and the JSON ledger
/// use one-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    universe: usize,
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(universe: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&index) = members.iter().find(|&&i| i >= universe) {
            return Err(Error::IndexOutOfRange { index, universe });
        }
        Ok(Self { universe, members })
    }

    pub fn from_one_based(universe: usize, members: &[usize]) -> Result<Self> {
        let zero_based = members
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or(Error::IndexOutOfRange { index: 0, universe })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, zero_based)
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            members: Vec::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        Self {
            universe,
            members: (0..universe).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.members.iter();
        self.members
            .iter()
            .all(|&x| it.by_ref().any(|&y| y == x))
    }

    pub fn without(&self, i: usize) -> IndexSet {
        IndexSet {
            universe: self.universe,
            members: self.members.iter().copied().filter(|&x| x != i).collect(),
        }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            universe: self.universe,
            members: self.iter().filter(|&i| other.contains(i)).collect(),
        }
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            universe: self.universe,
            members: (0..self.universe).filter(|&i| !self.contains(i)).collect(),
        }
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.members.iter().map(|i| i + 1).collect()
    }

    /// Bitmask of the members. Panics when the universe exceeds 64.
    pub fn mask(&self) -> u64 {
        assert!(self.universe <= 64, "bitmask needs a universe of at most 64");
        self.members.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }

    pub fn from_mask(universe: usize, mask: u64) -> IndexSet {
        IndexSet {
            universe,
            members: (0..universe).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    fn key(&self) -> String {
        self.to_one_based()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// State of the certificate search: the collections `F` (surjective),
/// `I` (non-surjective) and the pending worklist.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateLedger {
    m: usize,
    surjective: Vec<IndexSet>,
    nonsurjective: Vec<IndexSet>,
    worklist: Vec<IndexSet>,
    best_h: f64,
    per_f: BTreeMap<IndexSet, f64>,
    probes: usize,
}

impl CertificateLedger {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            surjective: Vec::new(),
            nonsurjective: Vec::new(),
            worklist: Vec::new(),
            best_h: 0.0,
            per_f: BTreeMap::new(),
            probes: 0,
        }
    }

    /// Rebuilds a finished ledger from stored collections, e.g. a JSON file.
    pub fn from_parts(
        m: usize,
        surjective: Vec<IndexSet>,
        nonsurjective: Vec<IndexSet>,
        per_f: BTreeMap<IndexSet, f64>,
    ) -> Result<Self> {
        for s in surjective.iter().chain(&nonsurjective).chain(per_f.keys()) {
            if s.universe() != m {
                return Err(Error::DimensionMismatch(format!(
                    "set {s} lives in a universe of {} but the ledger has m = {m}",
                    s.universe()
                )));
            }
        }
        let best_h = per_f.values().copied().fold(0.0, f64::max);
        Ok(Self {
            m,
            surjective,
            nonsurjective,
            worklist: Vec::new(),
            best_h,
            per_f,
            probes: 0,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The collection `F`, in insertion order.
    pub fn surjective(&self) -> &[IndexSet] {
        &self.surjective
    }

    /// The collection `I`, in insertion order.
    pub fn nonsurjective(&self) -> &[IndexSet] {
        &self.nonsurjective
    }

    pub fn worklist(&self) -> &[IndexSet] {
        &self.worklist
    }

    pub fn best_h(&self) -> f64 {
        self.best_h
    }

    pub fn per_f_values(&self) -> &BTreeMap<IndexSet, f64> {
        &self.per_f
    }

    /// Number of probe calls made while building the ledger.
    pub fn probes(&self) -> usize {
        self.probes
    }

    pub fn verify_cover(&self) -> Result<bool> {
        verify_joint_certificates(&self.surjective, &self.nonsurjective, self.m)
    }

    fn record_surjective(&mut self, set: IndexSet, h: f64) {
        self.best_h = self.best_h.max(h);
        self.per_f.insert(set.clone(), h);
        self.surjective.push(set);
    }

    pub fn to_document(&self) -> LedgerDocument {
        LedgerDocument {
            m: self.m,
            surjective: self.surjective.iter().map(IndexSet::to_one_based).collect(),
            nonsurjective: self
                .nonsurjective
                .iter()
                .map(IndexSet::to_one_based)
                .collect(),
            h: self.best_h,
            per_f: self.per_f.iter().map(|(k, &v)| (k.key(), v)).collect(),
        }
    }
}

/// JSON form of a ledger, with one-based indices:
/// `{"m": int, "F": [[int]], "I": [[int]], "H": float, "per_F": {"1,2": float}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerDocument {
    pub m: usize,
    #[serde(rename = "F")]
    pub surjective: Vec<Vec<usize>>,
    #[serde(rename = "I")]
    pub nonsurjective: Vec<Vec<usize>>,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "per_F", default)]
    pub per_f: BTreeMap<String, f64>,
}

impl LedgerDocument {
    pub fn to_ledger(&self) -> Result<CertificateLedger> {
        let sets = |lists: &[Vec<usize>]| {
            lists
                .iter()
                .map(|s| IndexSet::from_one_based(self.m, s))
                .collect::<Result<Vec<_>>>()
        };
        let per_f = self
            .per_f
            .iter()
            .map(|(k, &v)| {
                let members = k
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim().parse::<usize>().map_err(|_| {
                            Error::InvalidInput(format!("bad per_F key `{k}`"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((IndexSet::from_one_based(self.m, &members)?, v))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        CertificateLedger::from_parts(
            self.m,
            sets(&self.surjective)?,
            sets(&self.nonsurjective)?,
            per_f,
        )
    }
}
