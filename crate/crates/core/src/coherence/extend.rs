use num_bigint::BigInt;
use num_traits::Zero;

use crate::prosys::{Caps, SystemError};

use super::family::{position, CoherentFamily};
use super::ideal::{elements, SetIdeal};
use super::CoherenceError;

/// Embeds `κ × λ` into `μ × ν`, sending `i·λ + j` to `i·ν + j`.
fn embed(mask: u64, lambda: usize, nu: usize) -> u64 {
    elements(mask).fold(0, |m, b| m | 1 << ((b / lambda) * nu + b % lambda))
}

/// `g = f ∩ (κ × λ)`, re-encoded over `κ × λ`.
fn restrict(mask: u64, kappa: usize, lambda: usize, nu: usize) -> u64 {
    elements(mask).fold(0, |m, b| {
        let (i, j) = (b / nu, b % nu);
        if i < kappa && j < lambda {
            m | 1 << (i * lambda + j)
        } else {
            m
        }
    })
}

/// Extends a family over the full index `^κ P(λ)` to `^μ P(ν)`: on a tuple
/// `f⃗` the value is `φ_{g⃗}` on `X(g⃗)` (with `g_i = f_i ∩ (κ × λ)`) and zero
/// elsewhere. The modulus is carried along by the embedding.
pub fn extend_family(
    fam: &CoherentFamily,
    kappa: usize,
    lambda: usize,
    mu: usize,
    nu: usize,
    caps: &Caps,
) -> Result<CoherentFamily, CoherenceError> {
    if mu < kappa || nu < lambda {
        return Err(CoherenceError::ParameterNotLarger { kappa, lambda, mu, nu });
    }
    let old_bits = kappa * lambda;
    let full_old: Vec<u64> = (0..1u64 << old_bits).collect();
    if fam.ground() != old_bits || fam.index() != full_old.as_slice() {
        return Err(CoherenceError::BadInput(format!(
            "family is not indexed by the full poset of functions {kappa} -> P({lambda})"
        )));
    }
    let bits = mu * nu;
    if bits > 63 || 1u128 << bits > caps.max_poset as u128 {
        return Err(SystemError::PosetCapExceeded { cap: caps.max_poset, needed: 1u128 << bits.min(127) }.into());
    }
    let modulus = SetIdeal::from_masks(bits, fam.modulus().generators().iter().map(|&g| embed(g, lambda, nu)).collect());
    let index: Vec<u64> = (0..1u64 << bits).collect();
    let mut out = CoherentFamily::zero(fam.n(), index, fam.target(), modulus)?;
    let r = fam.target().rank;
    let inner = embed((1u64 << old_bits) - 1, lambda, nu);
    for tuple in out.tuples(fam.n()).collect::<Vec<_>>() {
        let dom = out.domain(&tuple);
        if dom & inner == 0 {
            continue;
        }
        let g: Vec<usize> = tuple.iter().map(|&f| restrict(f as u64, kappa, lambda, nu) as usize).collect();
        let old = fam.get(&g);
        if old.iter().all(Zero::is_zero) {
            continue;
        }
        let old_dom = fam.domain(&g);
        let mut v = vec![BigInt::zero(); dom.count_ones() as usize * r];
        for y in elements(dom & inner) {
            let y_old = restrict(1 << y, kappa, lambda, nu).trailing_zeros() as usize;
            for k in 0..r {
                v[position(dom, y) * r + k] = old[position(old_dom, y_old) * r + k].clone();
            }
        }
        out.set(&tuple, v)?;
    }
    Ok(out)
}
