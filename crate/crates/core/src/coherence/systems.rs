use num_bigint::BigInt;
use num_traits::One;

use crate::prosys::{build_system, Caps, InverseSystem, Poset, SesOfSystems, SystemError};
use crate::zmodule::IntegerMatrix;

use super::family::{position, Target};
use super::ideal::{elements, full_mask, set_name, SetIdeal};
use super::CoherenceError;

/// Poset of distinct subsets ordered by inclusion, named in set notation.
pub fn subset_poset(index: &[u64]) -> Poset {
    let names = index.iter().map(|&s| set_name(s)).collect();
    let mut rel = Vec::new();
    for (a, &x) in index.iter().enumerate() {
        for (b, &y) in index.iter().enumerate() {
            if a != b && x & !y == 0 {
                rel.push((a, b));
            }
        }
    }
    Poset::new(names, &rel).expect("inclusion is a partial order on distinct sets")
}

/// Coordinate inclusion `H^{small} → H^{big}` for `small ⊆ big` (as masks),
/// each element carrying `rank` coordinates.
fn coordinate_matrix(rows_dom: u64, cols_dom: u64, target: Target, transpose: bool) -> IntegerMatrix {
    let r = target.rank;
    let (small, big) = if transpose { (cols_dom, rows_dom) } else { (rows_dom, cols_dom) };
    let (nr, nc) = (small.count_ones() as usize * r, big.count_ones() as usize * r);
    let mut m = IntegerMatrix::zeros(nr, nc, target.coeff);
    for y in elements(small) {
        for k in 0..r {
            m.set(position(small, y) * r + k, position(big, y) * r + k, BigInt::one()).expect("in range");
        }
    }
    if transpose {
        m.transpose()
    } else {
        m
    }
}

/// Restriction system over `index` with term at `I` the functions on `I ∩ keep`.
fn restriction_system(index: &[u64], keep: u64, target: Target) -> Result<InverseSystem, SystemError> {
    let poset = subset_poset(index);
    let ranks = index.iter().map(|&s| (s & keep).count_ones() as usize * target.rank).collect();
    let mut maps = Vec::new();
    for (x, y) in poset.covers() {
        maps.push((x, y, coordinate_matrix(index[x] & keep, index[y] & keep, target, false)));
    }
    build_system(poset, ranks, maps, target.coeff)
}

/// `X[I, J, H]` over the generator list of `index_ideal`: the term at `I` is
/// `H^{I ∩ J_max}` and the maps are restrictions.
pub fn build_x_system(index_ideal: &SetIdeal, modulus: &SetIdeal, target: Target) -> Result<InverseSystem, CoherenceError> {
    check_grounds(index_ideal, modulus)?;
    Ok(restriction_system(&index_ideal.generator_list(), modulus.jmax(), target)?)
}

/// The quotient `B / X` with terms `H^{I ∖ J_max}`.
pub fn build_quotient_system(
    index_ideal: &SetIdeal,
    modulus: &SetIdeal,
    target: Target,
) -> Result<InverseSystem, CoherenceError> {
    check_grounds(index_ideal, modulus)?;
    let keep = full_mask(modulus.ground()) & !modulus.jmax();
    Ok(restriction_system(&index_ideal.generator_list(), keep, target)?)
}

/// `0 → X → B → B/X → 0` with `B_I = H^I`.
pub fn build_x_ses(index_ideal: &SetIdeal, modulus: &SetIdeal, target: Target) -> Result<SesOfSystems, CoherenceError> {
    check_grounds(index_ideal, modulus)?;
    let index = index_ideal.generator_list();
    ses_over(&index, modulus.ground(), modulus.jmax(), target)
}

fn ses_over(index: &[u64], ground: usize, jmax: u64, target: Target) -> Result<SesOfSystems, CoherenceError> {
    let all = full_mask(ground);
    let sub = restriction_system(index, jmax, target)?;
    let mid = restriction_system(index, all, target)?;
    let quot = restriction_system(index, all & !jmax, target)?;
    let inclusion = index.iter().map(|&s| coordinate_matrix(s, s & jmax, target, true)).collect();
    let projection = index.iter().map(|&s| coordinate_matrix(s & !jmax, s, target, false)).collect();
    Ok(SesOfSystems::new(sub, mid, quot, inclusion, projection)?)
}

fn check_grounds(a: &SetIdeal, b: &SetIdeal) -> Result<(), CoherenceError> {
    if a.ground() != b.ground() {
        return Err(CoherenceError::BadInput(format!(
            "index ideal lives on {} points, modulus on {}",
            a.ground(),
            b.ground()
        )));
    }
    Ok(())
}

/// `0 → A_{κ,λ} → B_{κ,λ} → (B/A)_{κ,λ} → 0` over all `f : κ → P(λ)`, listed
/// by the bitmask of `X(f)`. At finite parameters `A = B` and the quotient is zero.
pub fn build_akl_systems(kappa: usize, lambda: usize, target: Target, caps: &Caps) -> Result<SesOfSystems, CoherenceError> {
    let bits = kappa * lambda;
    let needed: u128 = if bits >= 127 { u128::MAX } else { 1u128 << bits };
    if needed > caps.max_poset as u128 || bits > 63 {
        return Err(SystemError::PosetCapExceeded { cap: caps.max_poset, needed }.into());
    }
    let index: Vec<u64> = (0..1u64 << bits).collect();
    let all = full_mask(bits);
    let ses = ses_over(&index, bits, all, target)?;
    if ses.quot().total_rank() != 0 {
        return Err(CoherenceError::Verification("finite-parameter quotient (B/A) is not zero".into()));
    }
    Ok(ses)
}

/// `Y[κ, X, Ĩ, K]`: ground `κ × X` (encoded `i·|X| + x`), index list the
/// union-closure of `{κ × I : I a generator of Ĩ}`, and modulus generated by
/// `{s × X : s ⊆ κ finite}`, which is everything when `κ` is finite.
pub fn build_y_system(
    kappa: usize,
    x_size: usize,
    tilde: &SetIdeal,
    target: Target,
    caps: &Caps,
) -> Result<InverseSystem, CoherenceError> {
    if tilde.ground() != x_size {
        return Err(CoherenceError::BadInput(format!("ideal lives on {} points, X has {x_size}", tilde.ground())));
    }
    let ground = kappa * x_size;
    if ground > super::ideal::MAX_GROUND {
        return Err(CoherenceError::GroundTooLarge(ground));
    }
    let closure = union_closure(&tilde.generator_list(), caps)?;
    let lift = |s: u64| (0..kappa).fold(0u64, |m, i| m | s << (i * x_size));
    let index: Vec<u64> = closure.iter().map(|&s| lift(s)).collect();
    let index_ideal = SetIdeal::from_masks(ground, index);
    let modulus = SetIdeal::from_masks(ground, vec![full_mask(ground)]);
    build_x_system(&index_ideal, &modulus, target)
}

/// Closure of a list of sets under pairwise unions, sorted by bitmask.
pub fn union_closure(gens: &[u64], caps: &Caps) -> Result<Vec<u64>, CoherenceError> {
    let mut out: Vec<u64> = gens.to_vec();
    out.sort_unstable();
    out.dedup();
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &a in &frontier {
            for &b in gens {
                let u = a | b;
                if out.binary_search(&u).is_err() && !next.contains(&u) {
                    next.push(u);
                }
            }
        }
        out.extend(next.iter().copied());
        out.sort_unstable();
        if out.len() as u64 > caps.max_poset {
            return Err(SystemError::PosetCapExceeded { cap: caps.max_poset, needed: out.len() as u128 }.into());
        }
        frontier = next;
    }
    Ok(out)
}
