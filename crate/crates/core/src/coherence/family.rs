use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::zmodule::Coeff;

use super::ideal::{elements, set_name, SetIdeal};
use super::CoherenceError;

/// Coefficient group `H = R^rank` with `R` = ℤ or ℤ/p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Target {
    pub coeff: Coeff,
    pub rank: usize,
}

impl Target {
    pub fn new(coeff: Coeff, rank: usize) -> Self {
        Target { coeff, rank }
    }
}

/// Sorts `tuple`, returning the permutation sign, or `None` if it repeats an index.
pub(crate) fn sort_with_sign(tuple: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut t = tuple.to_vec();
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((t, sign))
}

/// Position of `y` among the elements of `domain`.
pub(crate) fn position(domain: u64, y: usize) -> usize {
    (domain & ((1u64 << y) - 1)).count_ones() as usize
}

/// Alternating family `φ_{I⃗} : ⋂ I⃗ → H` over `n`-tuples from an index list,
/// stored on strictly increasing tuples of list positions.
///
/// The value vector for a tuple lists the elements of `⋂ I⃗` in increasing
/// order, each contributing `rank` consecutive entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherentFamily {
    n: usize,
    index: Vec<u64>,
    target: Target,
    modulus: SetIdeal,
    values: BTreeMap<Vec<usize>, Vec<BigInt>>,
}

impl CoherentFamily {
    /// The zero family. The index list must consist of distinct subsets of the
    /// modulus' ground set.
    pub fn zero(n: usize, index: Vec<u64>, target: Target, modulus: SetIdeal) -> Result<Self, CoherenceError> {
        if n == 0 {
            return Err(CoherenceError::BadInput("family dimension must be at least 1".into()));
        }
        let ground = super::ideal::full_mask(modulus.ground());
        for (i, &s) in index.iter().enumerate() {
            if s & !ground != 0 {
                return Err(CoherenceError::GeneratorOutOfGround {
                    generator: i,
                    element: elements(s & !ground).next().unwrap_or(0),
                });
            }
        }
        if index.iter().duplicates().next().is_some() {
            return Err(CoherenceError::BadInput("index list repeats a set".into()));
        }
        Ok(CoherentFamily { n, index, target, modulus, values: BTreeMap::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn modulus(&self) -> &SetIdeal {
        &self.modulus
    }

    pub fn ground(&self) -> usize {
        self.modulus.ground()
    }

    /// `⋂ I⃗` for a tuple of list positions.
    pub fn domain(&self, tuple: &[usize]) -> u64 {
        tuple.iter().fold(super::ideal::full_mask(self.ground()), |m, &t| m & self.index[t])
    }

    fn check_tuple(&self, tuple: &[usize]) -> Result<(), CoherenceError> {
        if tuple.len() != self.n {
            return Err(CoherenceError::BadInput(format!("tuple {tuple:?} has length {}, expected {}", tuple.len(), self.n)));
        }
        if let Some(&t) = tuple.iter().find(|&&t| t >= self.index.len()) {
            return Err(CoherenceError::BadInput(format!("index position {t} out of range")));
        }
        Ok(())
    }

    /// Sets `φ_{tuple}`; permuted tuples store `sign · values` on the sorted
    /// tuple. Degenerate tuples only accept zero.
    pub fn set(&mut self, tuple: &[usize], values: Vec<BigInt>) -> Result<(), CoherenceError> {
        self.check_tuple(tuple)?;
        let len = self.domain(tuple).count_ones() as usize * self.target.rank;
        if values.len() != len {
            return Err(CoherenceError::BadInput(format!(
                "value for tuple {tuple:?} has {} entries, expected {len}",
                values.len()
            )));
        }
        let coeff = self.target.coeff;
        match sort_with_sign(tuple) {
            None => {
                if values.iter().any(|v| !coeff.reduce(v.clone()).is_zero()) {
                    return Err(CoherenceError::BadInput(format!("nonzero value on degenerate tuple {tuple:?}")));
                }
                Ok(())
            }
            Some((sorted, sign)) => {
                let v: Vec<BigInt> = values.into_iter().map(|x| coeff.reduce(if sign < 0 { -x } else { x })).collect();
                if v.iter().all(Zero::is_zero) {
                    self.values.remove(&sorted);
                } else {
                    self.values.insert(sorted, v);
                }
                Ok(())
            }
        }
    }

    /// `φ_{tuple}` with the alternating sign applied; zero on degenerate tuples.
    pub fn get(&self, tuple: &[usize]) -> Vec<BigInt> {
        let len = self.domain(tuple).count_ones() as usize * self.target.rank;
        match sort_with_sign(tuple) {
            None => vec![BigInt::zero(); len],
            Some((sorted, sign)) => match self.values.get(&sorted) {
                None => vec![BigInt::zero(); len],
                Some(v) if sign > 0 => v.clone(),
                Some(v) => v.iter().map(|x| self.target.coeff.reduce(-x)).collect(),
            },
        }
    }

    /// `φ_{tuple}(y, k)` for `y ∈ ⋂ tuple` (sorted tuple, no sign handling).
    pub(crate) fn stored_at(&self, sorted: &[usize], y: usize, k: usize) -> BigInt {
        match self.values.get(sorted) {
            None => BigInt::zero(),
            Some(v) => v[position(self.domain(sorted), y) * self.target.rank + k].clone(),
        }
    }

    /// Entries on strictly increasing tuples that are not identically zero.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<BigInt>)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Strictly increasing tuples of list positions of length `len`.
    pub fn tuples(&self, len: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..self.index.len()).combinations(len)
    }

    pub fn describe_tuple(&self, tuple: &[usize]) -> String {
        let parts: Vec<String> = tuple.iter().map(|&t| set_name(self.index[t])).collect();
        format!("({})", parts.join(", "))
    }
}

/// Result of a coherence check; the witness names a tuple of list positions
/// and a coordinate `(y, k)` outside `J_max` where the alternating sum is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceCheck {
    pub coherent: bool,
    pub witness: Option<CoherenceWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceWitness {
    pub tuple: Vec<usize>,
    pub element: usize,
    pub component: usize,
    pub value: BigInt,
}

/// `Σ_i (-1)^i φ_{T^i}` at `(y, k)` for a strictly increasing `(n+1)`-tuple `T`.
pub(crate) fn alternating_sum(fam: &CoherentFamily, tuple: &[usize], y: usize, k: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..tuple.len() {
        let mut face = tuple.to_vec();
        face.remove(i);
        let v = fam.stored_at(&face, y, k);
        if i % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    fam.target.coeff.reduce(acc)
}

/// Checks `supp(Σ_i (-1)^i φ_{I⃗^i}|_{⋂ I⃗}) ⊆ J_max` for every strictly
/// increasing `(n+1)`-tuple.
pub fn is_n_coherent(fam: &CoherentFamily) -> CoherenceCheck {
    let jmax = fam.modulus.jmax();
    for tuple in fam.tuples(fam.n + 1) {
        let dom = fam.domain(&tuple) & !jmax;
        for y in elements(dom) {
            for k in 0..fam.target.rank {
                let v = alternating_sum(fam, &tuple, y, k);
                if !v.is_zero() {
                    return CoherenceCheck {
                        coherent: false,
                        witness: Some(CoherenceWitness { tuple, element: y, component: k, value: v }),
                    };
                }
            }
        }
    }
    CoherenceCheck { coherent: true, witness: None }
}
