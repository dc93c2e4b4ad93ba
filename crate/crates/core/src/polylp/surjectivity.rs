use super::{
    add_norm_objective, check_universe, positive_support, LpBuilder, LpOutcome, LpStatus,
    NormConfig, Relation, SurjectivityOutcome, SURJ_TOL,
};
use crate::certkit::IndexSet;
use crate::error::{Error, Result};
use crate::linalg::{
    colspace_basis, unit_ball_vertices, Matrix, NormTag, SubspaceBasis, DEFAULT_RANK_TOL,
};

fn optimal(out: LpOutcome) -> Result<LpOutcome> {
    match out.status {
        LpStatus::Optimal => Ok(out),
        s => Err(super::LpError::UnexpectedStatus(s).into()),
    }
}

fn zero_row_in(m: &Matrix, set: &IndexSet) -> Option<usize> {
    set.iter().find(|&i| m.row(i).iter().all(|&x| x == 0.0))
}

fn zero_row_certificate(universe: usize, offset: usize, len: usize, i: usize) -> SurjectivityOutcome {
    let mut w = vec![0.0; len];
    w[offset + i] = 1.0;
    SurjectivityOutcome {
        value: 0.0,
        witness_v: w,
        support: IndexSet::new(universe, vec![i]).expect("row index in range"),
        surjective: false,
    }
}

/// `min ‖A_Jᵀ v‖*` over `v ≥ 0` supported on `J` with `‖v_N‖* = 1`, where
/// `N ⊆ J` is the normalized block and the coordinates in `J \ N` carry no
/// normalization. Returns `None` when `N` is empty.
fn conic_min(
    a: &Matrix,
    j: &IndexSet,
    normalized: &IndexSet,
    cfg: NormConfig,
) -> Result<Option<(f64, Vec<f64>)>> {
    if normalized.is_empty() {
        return Ok(None);
    }
    let m = a.rows();
    let members = j.members();
    let mut base = LpBuilder::new();
    let first = base.add_vars(members.len(), Some(0.0), None, 0.0);
    let var_of = |i: usize| first + members.iter().position(|&k| k == i).unwrap();
    let exprs = (0..a.cols())
        .map(|c| {
            members
                .iter()
                .enumerate()
                .filter(|&(_, &i)| a[(i, c)] != 0.0)
                .map(|(k, &i)| (first + k, a[(i, c)]))
                .collect()
        })
        .collect();
    add_norm_objective(&mut base, exprs, cfg.domain.dual());

    let mut candidates = Vec::new();
    match cfg.codomain {
        NormTag::LInf => {
            // ‖v_N‖₁ = 1 is linear because v ≥ 0.
            let terms = normalized.iter().map(|i| (var_of(i), 1.0)).collect();
            base.add_row(terms, Relation::Eq, 1.0);
            candidates.push(base);
        }
        NormTag::L1 => {
            // ‖v_N‖∞ = 1: one LP per coordinate of N pinned at 1.
            for i in normalized.iter() {
                base.set_bounds(var_of(i), Some(0.0), Some(1.0));
            }
            for i in normalized.iter() {
                let mut lp = base.clone();
                lp.set_bounds(var_of(i), Some(1.0), Some(1.0));
                candidates.push(lp);
            }
        }
        NormTag::L2 => unreachable!(),
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for lp in candidates {
        let out = optimal(lp.solve()?)?;
        if best.as_ref().map_or(true, |b| out.value < b.0) {
            let mut w = vec![0.0; m];
            for (k, &i) in members.iter().enumerate() {
                w[i] = out.primal[first + k].max(0.0);
            }
            best = Some((out.value.max(0.0), w));
        }
    }
    Ok(best)
}

fn require_exact(cfg: NormConfig, context: &'static str) -> Result<()> {
    if cfg.is_exact() {
        Ok(())
    } else {
        Err(cfg.unsupported(context))
    }
}

/// Surjectivity test and value problem for `A_J`:
/// `min { ‖A_Jᵀ v‖* : v ≥ 0, ‖v‖* = 1 }`, dual norms taken of the domain and
/// codomain norms of `cfg`. The set is surjective iff the value is positive,
/// in which case `1 / value` is its Hoffman value.
pub fn min_conic_image_norm(a: &Matrix, j: &IndexSet, cfg: NormConfig) -> Result<SurjectivityOutcome> {
    check_universe(j, a.rows(), "matrix rows")?;
    require_exact(cfg, "the surjectivity LP")?;
    let m = a.rows();
    if j.is_empty() {
        return Ok(SurjectivityOutcome::vacuous(m, m));
    }
    if let Some(i) = zero_row_in(a, j) {
        return Ok(zero_row_certificate(m, 0, m, i));
    }
    let eps = SURJ_TOL * a.max_row_norm(cfg.domain.dual()).max(1.0);
    let (value, w) = conic_min(a, j, j, cfg)?.expect("J is nonempty");
    let surjective = value > eps;
    let support = if surjective {
        IndexSet::empty(m)
    } else {
        positive_support(m, &w, j.members())
    };
    Ok(SurjectivityOutcome {
        value,
        witness_v: w,
        support,
        surjective,
    })
}

/// Per-set value for the restricted constant: the minimum of `‖A_Jᵀ v‖*`
/// over `v ≥ 0` with only the block `J ∩ L` normalized. `+∞` when `J ∩ L`
/// is empty.
pub fn restricted_conic_value(
    a: &Matrix,
    j: &IndexSet,
    l: &IndexSet,
    cfg: NormConfig,
) -> Result<f64> {
    check_universe(j, a.rows(), "matrix rows")?;
    check_universe(l, a.rows(), "matrix rows")?;
    require_exact(cfg, "the restricted value LP")?;
    let normalized = j.intersection(l);
    Ok(conic_min(a, j, &normalized, cfg)?.map_or(f64::INFINITY, |b| b.0))
}

fn check_blocks(a: &Matrix, c: &Matrix, j: &IndexSet) -> Result<()> {
    if a.cols() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} columns but C has {}",
            a.cols(),
            c.cols()
        )));
    }
    check_universe(j, c.rows(), "inequality block rows")
}

// Columns of Aᵀ Q for an orthonormal basis Q of the range of A: the map
// α ↦ Aᵀ(Qα) parametrizes {Aᵀ v : v ∈ range(A)}.
fn range_parametrization(a: &Matrix) -> (SubspaceBasis, Matrix) {
    let q = colspace_basis(a, DEFAULT_RANK_TOL);
    let qm = q.to_matrix();
    let b = a.transpose().matmul(&qm);
    (q, b)
}

struct MixedLp {
    base: LpBuilder,
    alpha: usize,
    z: usize,
    r: usize,
}

// Shared skeleton: α free (v = Qα), z_J ≥ 0,
// objective ‖Aᵀv + C_Jᵀz‖ in `objective` norm.
fn mixed_skeleton(
    b: &Matrix,
    c: &Matrix,
    j: &IndexSet,
    objective: NormTag,
) -> MixedLp {
    let r = b.cols();
    let mut base = LpBuilder::new();
    let alpha = base.add_vars(r, None, None, 0.0);
    let z = base.add_vars(j.len(), Some(0.0), None, 0.0);
    let exprs = (0..b.rows())
        .map(|col| {
            let mut terms: Vec<(usize, f64)> = (0..r)
                .filter(|&k| b[(col, k)] != 0.0)
                .map(|k| (alpha + k, b[(col, k)]))
                .collect();
            for (k, i) in j.iter().enumerate() {
                if c[(i, col)] != 0.0 {
                    terms.push((z + k, c[(i, col)]));
                }
            }
            terms
        })
        .collect();
    add_norm_objective(&mut base, exprs, objective);
    MixedLp { base, alpha, z, r }
}

fn relsurj_eps(a: &Matrix, c: &Matrix) -> f64 {
    SURJ_TOL * a.max_row_norm(NormTag::L1).max(c.max_row_norm(NormTag::L1)).max(1.0)
}

fn mixed_witness(q: &SubspaceBasis, lp: &MixedLp, j: &IndexSet, out: &LpOutcome, p: usize) -> Vec<f64> {
    let m = q.ambient_dim();
    let mut w = vec![0.0; m + p];
    for (k, basis) in q.vectors().iter().enumerate().take(lp.r) {
        let coef = out.primal[lp.alpha + k];
        for i in 0..m {
            w[i] += coef * basis[i];
        }
    }
    for (k, i) in j.iter().enumerate() {
        w[m + i] = out.primal[lp.z + k].max(0.0);
    }
    w
}

/// Relative-surjectivity test for `[A, C, J]`:
/// `min ‖Aᵀv + C_Jᵀz‖₁` over `v ∈ range(A)`, `z ≥ 0` on `J`, `Σ z = 1`.
/// A zero optimum certifies failure through the support of `z`.
pub fn min_relsurj_detect(a: &Matrix, c: &Matrix, j: &IndexSet) -> Result<SurjectivityOutcome> {
    check_blocks(a, c, j)?;
    let (m, p) = (a.rows(), c.rows());
    if j.is_empty() {
        return Ok(SurjectivityOutcome::vacuous(p, m + p));
    }
    if let Some(i) = zero_row_in(c, j) {
        return Ok(zero_row_certificate(p, m, m + p, i));
    }
    let (q, b) = range_parametrization(a);
    let mut lp = mixed_skeleton(&b, c, j, NormTag::L1);
    let terms = (0..j.len()).map(|k| (lp.z + k, 1.0)).collect();
    lp.base.add_row(terms, Relation::Eq, 1.0);
    let out = optimal(lp.base.solve()?)?;
    let value = out.value.max(0.0);
    let w = mixed_witness(&q, &lp, j, &out, p);
    let surjective = value > relsurj_eps(a, c);
    let support = if surjective {
        IndexSet::empty(p)
    } else {
        positive_support(p, &w[m..], j.members())
    };
    Ok(SurjectivityOutcome {
        value,
        witness_v: w,
        support,
        surjective,
    })
}

/// Which block of the dual pair `(v, z)` carries the unit-norm constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormalizedBlock {
    /// `‖(v, z)‖* = 1`: equations and inequalities both hard.
    Both,
    /// `‖v‖* = 1`: the inequalities are easy.
    Equations,
    /// `‖z‖* = 1`: the equations are easy.
    Inequalities,
}

// Linear form α ↦ ⟨Q α, y⟩ as LP terms.
fn pairing(qm: &Matrix, alpha: usize, y: &[f64]) -> Vec<(usize, f64)> {
    qm.tr_mul_vec(y)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0.0)
        .map(|(k, c)| (alpha + k, c))
        .collect()
}

fn best_candidate(
    candidates: Vec<LpBuilder>,
    mut witness: impl FnMut(&LpOutcome) -> Vec<f64>,
) -> Result<Option<(f64, Vec<f64>)>> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for cand in candidates {
        let out = optimal(cand.solve()?)?;
        if best.as_ref().map_or(true, |b| out.value < b.0) {
            best = Some((out.value.max(0.0), witness(&out)));
        }
    }
    Ok(best)
}

/// Value problem for a relatively surjective `[A, C, J]`:
/// `min ‖Aᵀv + C_Jᵀz‖*` over `z ≥ 0` on `J` with the chosen block of `(v, z)`
/// at unit dual norm.
///
/// The dual norm of `v` is that of the functional it induces on the range
/// of `A`, where the residuals live. Its unit sphere is covered by the
/// hyperplanes `⟨v, y⟩ = 1` for `y` a vertex of the codomain unit ball within
/// the range, so the value is a minimum of one LP per vertex. When `A` has
/// full row rank these vertices are `±e_i` (ℓ1) or the sign vectors (ℓ∞).
/// Since `z ≥ 0`, its block needs `z_j = 1` per `j` (ℓ1 codomain) or
/// `Σ z = 1` (ℓ∞). The value is `+∞` when the normalized block is forced to
/// vanish.
pub fn min_relsurj_value(
    a: &Matrix,
    c: &Matrix,
    j: &IndexSet,
    cfg: NormConfig,
    block: NormalizedBlock,
) -> Result<SurjectivityOutcome> {
    check_blocks(a, c, j)?;
    if !cfg.domain.is_polyhedral() || !cfg.codomain.is_polyhedral() {
        return Err(cfg.unsupported("the relative surjectivity value LP"));
    }
    let (m, p) = (a.rows(), c.rows());
    let (q, b) = range_parametrization(a);
    let qm = q.to_matrix();
    let lp = mixed_skeleton(&b, c, j, cfg.domain.dual());
    let z_terms: Vec<(usize, f64)> = (0..j.len()).map(|k| (lp.z + k, 1.0)).collect();

    let v_vertices = match block {
        NormalizedBlock::Inequalities => Vec::new(),
        _ => unit_ball_vertices(&q, cfg.codomain)?,
    };
    let mut candidates = Vec::new();
    match (block, cfg.codomain) {
        (NormalizedBlock::Both, NormTag::LInf) => {
            // ‖(v, z)‖₁ on the product: one hyperplane per vertex of the
            // range part, with z paired against the all-ones vector.
            if v_vertices.is_empty() && !j.is_empty() {
                let mut cand = lp.base.clone();
                cand.add_row(z_terms.clone(), Relation::Eq, 1.0);
                candidates.push(cand);
            }
            for y in &v_vertices {
                let mut cand = lp.base.clone();
                let mut terms = pairing(&qm, lp.alpha, y);
                terms.extend(z_terms.iter().copied());
                cand.add_row(terms, Relation::Eq, 1.0);
                candidates.push(cand);
            }
        }
        _ => {
            for y in &v_vertices {
                let mut cand = lp.base.clone();
                cand.add_row(pairing(&qm, lp.alpha, y), Relation::Eq, 1.0);
                candidates.push(cand);
            }
            if block != NormalizedBlock::Equations && !j.is_empty() {
                if cfg.codomain == NormTag::L1 {
                    for k in 0..j.len() {
                        let mut cand = lp.base.clone();
                        cand.set_bounds(lp.z + k, Some(1.0), Some(1.0));
                        candidates.push(cand);
                    }
                } else {
                    let mut cand = lp.base.clone();
                    cand.add_row(z_terms.clone(), Relation::Eq, 1.0);
                    candidates.push(cand);
                }
            }
        }
    }

    let best = best_candidate(candidates, |out| mixed_witness(&q, &lp, j, out, p))?;
    let (value, witness_v) = best.unwrap_or((f64::INFINITY, vec![0.0; m + p]));
    let surjective = value > relsurj_eps(a, c);
    let support = if surjective {
        IndexSet::empty(p)
    } else {
        positive_support(p, &witness_v[m..], j.members())
    };
    Ok(SurjectivityOutcome {
        value,
        witness_v,
        support,
        surjective,
    })
}

/// Value problem behind the facial-distance constant for a column set `J`:
/// `min ‖Aᵀv + t·1 − z‖*` over `(v, t) ∈ range([A; 1ᵀ])`, `z ≥ 0` on `J`,
/// with `v` at unit dual norm as a functional on `L_A = {Ax : 1ᵀx = 0}`.
/// As in [`min_relsurj_value`] that normalization is enumerated over the
/// vertices of the codomain unit ball inside `L_A`. The witness is
/// `(v, t, z)`.
pub fn facial_value(a: &Matrix, j: &IndexSet, cfg: NormConfig) -> Result<SurjectivityOutcome> {
    let (m, n) = (a.rows(), a.cols());
    check_universe(j, n, "matrix columns")?;
    if !cfg.domain.is_polyhedral() || !cfg.codomain.is_polyhedral() {
        return Err(cfg.unsupported("the facial distance LP"));
    }
    let ones = Matrix::from_row_major(1, n, vec![1.0; n])?;
    let a_tilde = a.vstack(&ones)?;
    let (q, b) = range_parametrization(&a_tilde);
    let qm = q.to_matrix();
    let neg_identity = Matrix::identity(n).scaled(-1.0);
    let lp = mixed_skeleton(&b, &neg_identity, j, cfg.domain.dual());

    let mut centering = Matrix::identity(n);
    for r in 0..n {
        for s in 0..n {
            centering[(r, s)] -= 1.0 / n as f64;
        }
    }
    let l_a = colspace_basis(&a.matmul(&centering), DEFAULT_RANK_TOL);
    let candidates = unit_ball_vertices(&l_a, cfg.codomain)?
        .into_iter()
        .map(|y| {
            // ⟨v, y⟩ with v the top m coordinates of Q̃α
            let mut padded = y;
            padded.push(0.0);
            let mut cand = lp.base.clone();
            cand.add_row(pairing(&qm, lp.alpha, &padded), Relation::Eq, 1.0);
            cand
        })
        .collect();
    let best = best_candidate(candidates, |out| mixed_witness(&q, &lp, j, out, n))?;
    let (value, witness_v) = best.unwrap_or((f64::INFINITY, vec![0.0; m + 1 + n]));
    let surjective = value > SURJ_TOL * a_tilde.max_row_norm(NormTag::L1).max(1.0);
    Ok(SurjectivityOutcome {
        value,
        witness_v,
        support: IndexSet::empty(n),
        surjective,
    })
}
