use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coherence::{find_trivialization, CoherentFamily, SetIdeal, Target, Trivialization, MAX_GROUND};
use crate::zmodule::Coeff;

use super::ladder::LadderSystem;
use super::ordinal::OrdinalCNF;
use super::WalkError;

/// Nonzero entries `(row η, column ξ) ↦ value`.
pub type Entries = BTreeMap<(OrdinalCNF, OrdinalCNF), BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageKind {
    /// `φ_0` has empty domain.
    Zero,
    /// `φ_{α+1}` copies `φ_α` and is zero on the new column.
    Successor,
    /// `φ_β = ψ + χ_β^{(β)}`: the trivialization used and the ladder points
    /// where the characteristic function of `C_β` was inserted in row `β`.
    Limit { trivialization: Entries, inserted: Vec<OrdinalCNF> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub beta: OrdinalCNF,
    pub kind: StageKind,
    pub values: Entries,
}

/// The family `⟨φ_α : α ∈ grid⟩` with per-stage metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFamily {
    pub coeff: Coeff,
    pub grid: Vec<OrdinalCNF>,
    pub stages: Vec<Stage>,
}

/// Ordinals below `bound` whose Cantor normal form uses coefficients `< width`.
/// Closed under predecessors, and for `width ≥ 2` it contains `ω^e` for every
/// `ω^e < bound`.
pub fn ordinal_grid(bound: &OrdinalCNF, width: u64) -> Vec<OrdinalCNF> {
    let top = bound.degree().unwrap_or(0);
    let mut out = vec![OrdinalCNF::zero()];
    for e in (0..=top).rev() {
        let mut next = Vec::new();
        for x in &out {
            for c in 0..width {
                next.push(x.add(&OrdinalCNF::monomial(e, c)));
            }
        }
        out = next;
    }
    out.retain(|x| x < bound);
    out.sort();
    out.dedup();
    out
}

/// `supp(Φ↾β) ⊆ β`: every nonzero row of `φ_α`, `α < β`, lies below `β`.
pub fn support_invariant_holds(stages: &[Stage], beta: &OrdinalCNF) -> bool {
    stages.iter().filter(|s| &s.beta < beta).all(|s| s.values.keys().all(|(eta, _)| eta < beta))
}

/// Runs the recursion over the grid of ordinals below `bound`:
/// successors copy the previous stage, and at a limit `β` a trivialization
/// `ψ` of `Φ↾β` supported in rows `< β` is solved for and `χ_β` is inserted in
/// row `β`. At desk scale "modulo finite" is the improper ideal, so `ψ` is
/// whatever the solver returns for the vacuous system.
pub fn recursive_base_family(
    ladders: &dyn LadderSystem,
    bound: &OrdinalCNF,
    width: u64,
    coeff: Coeff,
) -> Result<BaseFamily, WalkError> {
    let grid = ordinal_grid(bound, width);
    let mut stages: Vec<Stage> = Vec::with_capacity(grid.len());
    for beta in &grid {
        if !support_invariant_holds(&stages, beta) {
            return Err(WalkError::Verification(format!("support invariant fails before stage {beta}")));
        }
        let stage = if beta.is_zero() {
            Stage { beta: beta.clone(), kind: StageKind::Zero, values: Entries::new() }
        } else if beta.is_successor() {
            let alpha = beta.pred().expect("successor");
            let prev = stages.iter().find(|s| s.beta == alpha).expect("grid is closed under predecessors");
            let values = prev.values.iter().filter(|((_, xi), _)| xi < &alpha).map(|(k, v)| (k.clone(), v.clone())).collect();
            Stage { beta: beta.clone(), kind: StageKind::Successor, values }
        } else {
            limit_stage(ladders, &grid, &stages, beta, coeff)?
        };
        stages.push(stage);
    }
    if !support_invariant_holds(&stages, bound) || !stages.iter().all(|s| s.values.keys().all(|(eta, _)| eta <= &s.beta)) {
        return Err(WalkError::Verification("support invariant fails after the last stage".into()));
    }
    Ok(BaseFamily { coeff, grid, stages })
}

fn limit_stage(
    ladders: &dyn LadderSystem,
    grid: &[OrdinalCNF],
    stages: &[Stage],
    beta: &OrdinalCNF,
    coeff: Coeff,
) -> Result<Stage, WalkError> {
    // coordinates where some earlier φ_α is nonzero; ψ vanishes elsewhere
    let mut coords: Vec<(OrdinalCNF, OrdinalCNF)> = stages.iter().flat_map(|s| s.values.keys().cloned()).collect();
    coords.sort();
    coords.dedup();
    if coords.len() > MAX_GROUND {
        return Err(WalkError::GridTooLarge { size: coords.len(), max: MAX_GROUND });
    }
    let ground = coords.len();
    let coord_mask = |alpha: &OrdinalCNF| {
        coords.iter().enumerate().filter(|(_, (_, xi))| xi < alpha).fold(0u64, |m, (i, _)| m | 1 << i)
    };
    // one index set per distinct domain, represented by the largest α having it
    let mut by_mask: BTreeMap<u64, &Stage> = BTreeMap::new();
    for s in stages.iter().filter(|s| &s.beta < beta) {
        by_mask.insert(coord_mask(&s.beta), s);
    }
    let index: Vec<u64> = by_mask.keys().copied().collect();
    // finite subsets of a finite ground set: J_max is everything
    let modulus = SetIdeal::from_masks(ground, (0..ground).map(|i| 1u64 << i).collect());
    let target = Target::new(coeff, 1);
    let mut fam = CoherentFamily::zero(1, index, target, modulus)?;
    for (pos, (&mask, s)) in by_mask.iter().enumerate() {
        let v: Vec<BigInt> = (0..ground)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| s.values.get(&coords[i]).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        fam.set(&[pos], v)?;
    }
    let psi = match find_trivialization(&fam)? {
        Some(Trivialization::Function(psi)) => psi,
        _ => return Err(WalkError::TrivializationNotFound(beta.to_string())),
    };
    let mut trivialization = Entries::new();
    for (i, v) in psi.into_iter().enumerate() {
        let v = coeff.reduce(v);
        if !v.is_zero() {
            if coords[i].0 >= *beta {
                return Err(WalkError::Verification(format!("trivialization at {beta} is supported outside the rows below {beta}")));
            }
            trivialization.insert(coords[i].clone(), v);
        }
    }
    let mut values = trivialization.clone();
    let mut inserted = Vec::new();
    let Some(top) = grid.iter().filter(|x| *x < beta).max() else {
        return Err(WalkError::Verification(format!("limit {beta} has nothing below it in the grid")));
    };
    for n in 0.. {
        let point = ladders.term(beta, n);
        if &point > top {
            break;
        }
        if grid.binary_search(&point).is_ok() {
            values.insert((beta.clone(), point.clone()), coeff.reduce(BigInt::one()));
            inserted.push(point);
        }
    }
    Ok(Stage { beta: beta.clone(), kind: StageKind::Limit { trivialization, inserted }, values })
}
