use std::fmt;
use std::str::FromStr;

use super::{solve_cover_gap, CertificateLedger, IndexSet};
use crate::error::{Error, Result};
use crate::polylp::SurjectivityOutcome;

/// Which certificate search drives a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    /// Worklist refinement from the full index set downward.
    #[default]
    Worklist,
    /// Repeatedly solve the cover-gap problem and probe its solution.
    CoverGap,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Worklist => "1",
            Algorithm::CoverGap => "2",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Algorithm::Worklist),
            "2" => Ok(Algorithm::CoverGap),
            other => Err(Error::InvalidInput(format!("unknown algorithm `{other}`"))),
        }
    }
}

fn probe_with_context<P>(probe: &mut P, set: &IndexSet) -> Result<SurjectivityOutcome>
where
    P: FnMut(&IndexSet) -> Result<SurjectivityOutcome>,
{
    let out = probe(set).map_err(|e| Error::Probe {
        set: set.clone(),
        source: Box::new(e),
    })?;
    if !out.surjective
        && (out.support.is_empty()
            || out.support.universe() != set.universe()
            || !out.support.is_subset_of(set))
    {
        return Err(Error::Probe {
            set: set.clone(),
            source: Box::new(Error::InvalidInput(format!(
                "non-surjectivity certificate {} is not a nonempty subset of the probed set",
                out.support
            ))),
        });
    }
    Ok(out)
}

fn value_with_context<V>(value_of: &mut V, set: &IndexSet, out: &SurjectivityOutcome) -> Result<f64>
where
    V: FnMut(&IndexSet, &SurjectivityOutcome) -> Result<f64>,
{
    value_of(set, out).map_err(|e| Error::Probe {
        set: set.clone(),
        source: Box::new(e),
    })
}

/// Step-by-step driver for the worklist search, exposed so that callers can
/// observe the ledger between probes.
#[derive(Clone, Debug)]
pub struct Algorithm1 {
    ledger: CertificateLedger,
}

impl Algorithm1 {
    pub fn new(m: usize) -> Self {
        let mut ledger = CertificateLedger::new(m);
        ledger.worklist.push(IndexSet::full(m));
        Self { ledger }
    }

    pub fn ledger(&self) -> &CertificateLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> CertificateLedger {
        self.ledger
    }

    pub fn is_done(&self) -> bool {
        self.ledger.worklist.is_empty()
    }

    /// The set the next step will probe: largest first, ties broken by the
    /// lexicographically smallest member list.
    pub fn next_set(&self) -> Option<&IndexSet> {
        self.ledger
            .worklist
            .iter()
            .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.members().cmp(b.members())))
    }

    /// Probes one worklist set and updates the ledger. Returns `false` once
    /// the worklist is empty.
    pub fn step<P, V>(&mut self, probe: &mut P, value_of: &mut V) -> Result<bool>
    where
        P: FnMut(&IndexSet) -> Result<SurjectivityOutcome>,
        V: FnMut(&IndexSet, &SurjectivityOutcome) -> Result<f64>,
    {
        let Some(j) = self.next_set().cloned() else {
            return Ok(false);
        };
        let out = probe_with_context(probe, &j)?;
        self.ledger.probes += 1;
        let ledger = &mut self.ledger;
        if out.surjective {
            let h = value_with_context(value_of, &j, &out)?;
            ledger.record_surjective(j.clone(), h);
            ledger.worklist.retain(|w| !w.is_subset_of(&j));
        } else {
            let cert = out.support;
            let (hit, kept): (Vec<IndexSet>, Vec<IndexSet>) =
                ledger.worklist.drain(..).partition(|w| cert.is_subset_of(w));
            let mut next = kept;
            for w in &hit {
                for i in cert.iter() {
                    let smaller = w.without(i);
                    if !ledger.surjective.iter().any(|f| smaller.is_subset_of(f)) {
                        next.push(smaller);
                    }
                }
            }
            ledger.worklist = keep_maximal(next);
            ledger.nonsurjective.push(cert);
        }
        Ok(true)
    }

    pub fn run<P, V>(mut self, mut probe: P, mut value_of: V) -> Result<CertificateLedger>
    where
        P: FnMut(&IndexSet) -> Result<SurjectivityOutcome>,
        V: FnMut(&IndexSet, &SurjectivityOutcome) -> Result<f64>,
    {
        while self.step(&mut probe, &mut value_of)? {}
        Ok(self.ledger)
    }
}

// Drops duplicates and every set contained in another member.
fn keep_maximal(mut sets: Vec<IndexSet>) -> Vec<IndexSet> {
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut out: Vec<IndexSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|t| s.is_subset_of(t)) {
            out.push(s);
        }
    }
    out
}

/// Worklist search. `probe` decides (relative) surjectivity of a set and
/// `value_of` returns its Hoffman value once it is known to be surjective.
pub fn algorithm1_run<P, V>(m: usize, probe: P, value_of: V) -> Result<CertificateLedger>
where
    P: FnMut(&IndexSet) -> Result<SurjectivityOutcome>,
    V: FnMut(&IndexSet, &SurjectivityOutcome) -> Result<f64>,
{
    Algorithm1::new(m).run(probe, value_of)
}

/// Cover-gap search: probe any set left uncovered by the current
/// certificates until none remains.
pub fn algorithm2_run<P, V>(m: usize, mut probe: P, mut value_of: V) -> Result<CertificateLedger>
where
    P: FnMut(&IndexSet) -> Result<SurjectivityOutcome>,
    V: FnMut(&IndexSet, &SurjectivityOutcome) -> Result<f64>,
{
    let mut ledger = CertificateLedger::new(m);
    while let Some(j) = solve_cover_gap(&ledger.surjective, &ledger.nonsurjective, m) {
        let out = probe_with_context(&mut probe, &j)?;
        ledger.probes += 1;
        if out.surjective {
            let h = value_with_context(&mut value_of, &j, &out)?;
            ledger.record_surjective(j, h);
        } else {
            ledger.nonsurjective.push(out.support);
        }
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Surjective iff the set avoids every "bad" set as a subset; the
    // certificate is the first bad set contained in J.
    fn synthetic_probe(
        bad: Vec<IndexSet>,
    ) -> impl FnMut(&IndexSet) -> Result<SurjectivityOutcome> {
        move |j: &IndexSet| {
            let hit = bad.iter().find(|b| b.is_subset_of(j)).cloned();
            Ok(SurjectivityOutcome {
                value: if hit.is_some() { 0.0 } else { 1.0 },
                witness_v: vec![],
                support: hit.clone().unwrap_or_else(|| IndexSet::empty(j.universe())),
                surjective: hit.is_none(),
            })
        }
    }

    fn size_value(j: &IndexSet, _: &SurjectivityOutcome) -> Result<f64> {
        Ok(j.len() as f64)
    }

    #[test]
    fn surjective_full_set_needs_one_probe() {
        let ledger = algorithm1_run(4, synthetic_probe(vec![]), size_value).unwrap();
        assert_eq!(ledger.surjective(), &[IndexSet::full(4)]);
        assert!(ledger.nonsurjective().is_empty());
        assert_eq!(ledger.probes(), 1);
        assert_eq!(ledger.best_h(), 4.0);
    }

    #[test]
    fn both_algorithms_cover_and_agree() {
        let m = 5;
        let bad = vec![
            IndexSet::new(m, vec![0, 1]).unwrap(),
            IndexSet::new(m, vec![2, 3, 4]).unwrap(),
        ];
        let l1 = algorithm1_run(m, synthetic_probe(bad.clone()), size_value).unwrap();
        let l2 = algorithm2_run(m, synthetic_probe(bad), size_value).unwrap();
        assert!(l1.verify_cover().unwrap());
        assert!(l2.verify_cover().unwrap());
        // Largest sets avoiding both bad sets have 3 elements.
        assert_eq!(l1.best_h(), 3.0);
        assert_eq!(l2.best_h(), 3.0);
    }

    #[test]
    fn zero_universe_probes_the_empty_set() {
        let ledger = algorithm1_run(0, synthetic_probe(vec![]), size_value).unwrap();
        assert_eq!(ledger.surjective(), &[IndexSet::empty(0)]);
        let ledger = algorithm2_run(0, synthetic_probe(vec![]), size_value).unwrap();
        assert_eq!(ledger.surjective(), &[IndexSet::empty(0)]);
        assert_eq!(ledger.best_h(), 0.0);
    }

    #[test]
    fn probe_errors_carry_the_set() {
        let err = algorithm1_run(
            2,
            |_: &IndexSet| Err(Error::InvalidInput("boom".into())),
            size_value,
        )
        .unwrap_err();
        match err {
            Error::Probe { set, .. } => assert_eq!(set, IndexSet::full(2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_certificates_are_rejected() {
        let probe = |j: &IndexSet| {
            Ok(SurjectivityOutcome {
                value: 0.0,
                witness_v: vec![],
                support: IndexSet::empty(j.universe()),
                surjective: false,
            })
        };
        assert!(algorithm1_run(2, probe, size_value).is_err());
    }

    #[test]
    fn keep_maximal_removes_dominated_sets() {
        let s = |v: Vec<usize>| IndexSet::new(4, v).unwrap();
        let out = keep_maximal(vec![s(vec![0, 1]), s(vec![0]), s(vec![0, 1]), s(vec![2, 3])]);
        assert_eq!(out, vec![s(vec![0, 1]), s(vec![2, 3])]);
    }
}
