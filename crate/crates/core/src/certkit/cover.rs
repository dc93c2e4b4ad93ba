use super::IndexSet;
use crate::error::{Error, Result};

/// Largest universe accepted by the exhaustive `2^m` cover check.
pub const MAX_VERIFY_UNIVERSE: usize = 22;

/// Finds a set `J` not below any `F` and not above any `I`, or `None` when
/// the collections already cover every subset.
///
/// Depth-first search over element membership. Each `I` needs at least one
/// of its elements excluded from `J`, and each `F` needs at least one
/// element outside `F` included; both are propagated as unit clauses. A
/// solution is extended greedily to a maximal one before it is returned.
pub fn solve_cover_gap(f: &[IndexSet], i: &[IndexSet], m: usize) -> Option<IndexSet> {
    let outside: Vec<Vec<usize>> = f.iter().map(|s| s.complement().members().to_vec()).collect();
    let inside: Vec<&[usize]> = i.iter().map(|s| s.members()).collect();
    let mut assign: Vec<Option<bool>> = vec![None; m];
    if !search(&outside, &inside, &mut assign) {
        return None;
    }
    let mut chosen: Vec<bool> = assign.iter().map(|a| a.unwrap_or(false)).collect();
    for e in 0..m {
        if chosen[e] {
            continue;
        }
        chosen[e] = true;
        let completes_some_i = inside.iter().any(|s| s.iter().all(|&x| chosen[x]));
        if completes_some_i {
            chosen[e] = false;
        }
    }
    let members = (0..m).filter(|&e| chosen[e]).collect();
    Some(IndexSet::new(m, members).expect("members below m"))
}

enum Propagation {
    Conflict,
    Stable,
}

fn propagate(outside: &[Vec<usize>], inside: &[&[usize]], assign: &mut [Option<bool>]) -> Propagation {
    loop {
        let mut changed = false;
        for set in inside {
            // at least one member excluded
            if set.iter().any(|&x| assign[x] == Some(false)) {
                continue;
            }
            let open: Vec<usize> = set.iter().copied().filter(|&x| assign[x].is_none()).collect();
            match open.len() {
                0 => return Propagation::Conflict,
                1 => {
                    assign[open[0]] = Some(false);
                    changed = true;
                }
                _ => {}
            }
        }
        for set in outside {
            // at least one element outside F included
            if set.iter().any(|&x| assign[x] == Some(true)) {
                continue;
            }
            let open: Vec<usize> = set.iter().copied().filter(|&x| assign[x].is_none()).collect();
            match open.len() {
                0 => return Propagation::Conflict,
                1 => {
                    assign[open[0]] = Some(true);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return Propagation::Stable;
        }
    }
}

fn search(outside: &[Vec<usize>], inside: &[&[usize]], assign: &mut Vec<Option<bool>>) -> bool {
    if let Propagation::Conflict = propagate(outside, inside, assign) {
        return false;
    }
    let Some(e) = assign.iter().position(|a| a.is_none()) else {
        return true;
    };
    for value in [true, false] {
        let saved = assign.clone();
        assign[e] = Some(value);
        if search(outside, inside, assign) {
            return true;
        }
        *assign = saved;
    }
    false
}

/// First subset of `{0..m}` (in bitmask order) covered by neither
/// collection, optionally skipping the empty set.
pub fn first_uncovered(
    f: &[IndexSet],
    i: &[IndexSet],
    m: usize,
    include_empty: bool,
) -> Result<Option<IndexSet>> {
    if m > MAX_VERIFY_UNIVERSE {
        return Err(Error::TooLarge {
            what: "cover verification universe",
            size: m,
            limit: MAX_VERIFY_UNIVERSE,
        });
    }
    for s in f.iter().chain(i) {
        if s.universe() != m {
            return Err(Error::DimensionMismatch(format!(
                "certificate {s} is over {} elements, expected {m}",
                s.universe()
            )));
        }
    }
    let f_masks: Vec<u32> = f.iter().map(|s| s.mask() as u32).collect();
    let i_masks: Vec<u32> = i.iter().map(|s| s.mask() as u32).collect();
    let start = if include_empty { 0u32 } else { 1 };
    for j in start..(1u32 << m) {
        let below_f = f_masks.iter().any(|&fm| j & !fm == 0);
        if below_f {
            continue;
        }
        let above_i = i_masks.iter().any(|&im| im & !j == 0);
        if !above_i {
            return Ok(Some(IndexSet::from_mask(m, j as u64)));
        }
    }
    Ok(None)
}

/// Exhaustive check that `(f, i)` are joint certificates over `{0..m}`.
pub fn verify_joint_certificates(f: &[IndexSet], i: &[IndexSet], m: usize) -> Result<bool> {
    Ok(first_uncovered(f, i, m, true)?.is_none())
}
