use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::prosys::{roos_complex_to_degree, Caps, InverseSystem, RoosComplex};
use crate::zmodule::{solve_integer_system, IntegerMatrix};

use super::family::{is_n_coherent, position, CoherentFamily, Target};
use super::ideal::{elements, full_mask, SetIdeal};
use super::systems::build_quotient_system;
use super::CoherenceError;

/// Translation between `n`-coherent families over a generator list and Roos
/// `(n-1)`-cocycles of the quotient system with terms `H^{I ∖ J_max}`.
///
/// A Roos chain `I_0 ⊊ … ⊊ I_{n-1}` is also a strictly increasing tuple of
/// list positions, and its term `H^{I_0 ∖ J_max}` is the part of `φ_{chain}`
/// that survives modulo `J`.
pub struct Dictionary {
    n: usize,
    index: Vec<u64>,
    target: Target,
    modulus: SetIdeal,
    quotient: InverseSystem,
    roos: RoosComplex,
}

impl Dictionary {
    pub fn new(index_ideal: &SetIdeal, modulus: &SetIdeal, target: Target, n: usize, caps: &Caps) -> Result<Self, CoherenceError> {
        if n == 0 {
            return Err(CoherenceError::BadInput("family dimension must be at least 1".into()));
        }
        let quotient = build_quotient_system(index_ideal, modulus, target)?;
        let roos = roos_complex_to_degree(&quotient, n, caps)?;
        Ok(Dictionary { n, index: index_ideal.generator_list(), target, modulus: modulus.clone(), quotient, roos })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quotient(&self) -> &InverseSystem {
        &self.quotient
    }

    pub fn roos(&self) -> &RoosComplex {
        &self.roos
    }

    /// Rank of the Roos cochain group holding the cocycles.
    pub fn cochain_rank(&self) -> usize {
        self.roos.complex().rank_at(self.n as i64 - 1)
    }

    fn keep(&self) -> u64 {
        full_mask(self.modulus.ground()) & !self.modulus.jmax()
    }

    pub fn zero_family(&self) -> CoherentFamily {
        CoherentFamily::zero(self.n, self.index.clone(), self.target, self.modulus.clone())
            .expect("generator list is a valid index list")
    }

    fn coboundary(&self, degree: i64, w: &[BigInt]) -> Result<Vec<BigInt>, CoherenceError> {
        let d = self.roos.complex().differential_at(degree);
        let coeff = self.target.coeff;
        Ok(d.apply(w)?.into_iter().map(|x| coeff.reduce(x)).collect())
    }

    pub fn is_cocycle(&self, z: &[BigInt]) -> Result<bool, CoherenceError> {
        if z.len() != self.cochain_rank() {
            return Err(CoherenceError::BadInput(format!(
                "cochain has {} entries, expected {}",
                z.len(),
                self.cochain_rank()
            )));
        }
        Ok(self.coboundary(self.n as i64 - 1, z)?.iter().all(Zero::is_zero))
    }

    /// Restricts a coherent family to chains and drops coordinates in `J_max`.
    pub fn family_to_cocycle(&self, fam: &CoherentFamily) -> Result<Vec<BigInt>, CoherenceError> {
        if fam.n() != self.n || fam.index() != self.index.as_slice() || fam.target() != self.target {
            return Err(CoherenceError::BadInput("family does not match the dictionary".into()));
        }
        if let Some(w) = is_n_coherent(fam).witness {
            return Err(CoherenceError::NotCoherent { tuple: w.tuple, element: w.element });
        }
        let r = self.target.rank;
        let keep = self.keep();
        let deg = self.n - 1;
        let mut z = vec![BigInt::zero(); self.cochain_rank()];
        for (k, chain) in self.roos.chains(deg).iter().enumerate() {
            let off = self.roos.offset(deg, k);
            let dom = self.index[chain[0]] & keep;
            for y in elements(dom) {
                for c in 0..r {
                    z[off + position(dom, y) * r + c] = fam.stored_at(chain, y, c);
                }
            }
        }
        Ok(z)
    }

    /// An `n`-coherent family whose cocycle is cohomologous to `z`. Fails with
    /// `NoCoherentLift` when the class of `z` has no coherent representative,
    /// which can happen when the generator list is not closed under
    /// intersections.
    pub fn cocycle_to_family(&self, z: &[BigInt]) -> Result<CoherentFamily, CoherenceError> {
        if !self.is_cocycle(z)? {
            return Err(CoherenceError::NotACocycle { degree: self.n - 1 });
        }
        let n = self.n;
        let r = self.target.rank;
        let keep = self.keep();
        let coeff = self.target.coeff;
        let deg = n - 1;
        let mut values: HashMap<Vec<usize>, Vec<BigInt>> = HashMap::new();
        let mut w_total = vec![BigInt::zero(); if deg == 0 { 0 } else { self.roos.complex().rank_at(deg as i64 - 1) }];
        for y in elements(keep) {
            let members: Vec<usize> = (0..self.index.len()).filter(|&i| self.index[i] >> y & 1 == 1).collect();
            if members.is_empty() {
                continue;
            }
            let tuples: Vec<Vec<usize>> = members.iter().copied().combinations(n).collect();
            let tuple_col: HashMap<&Vec<usize>, usize> = tuples.iter().enumerate().map(|(j, t)| (t, j)).collect();
            let lower: Vec<(usize, &Vec<usize>)> = if deg == 0 {
                Vec::new()
            } else {
                self.roos.chains(deg - 1).iter().enumerate().filter(|(_, c)| self.index[c[0]] >> y & 1 == 1).collect()
            };
            let lower_col: HashMap<&Vec<usize>, usize> =
                lower.iter().enumerate().map(|(j, (_, c))| (*c, tuples.len() + j)).collect();
            let chains: Vec<(usize, &Vec<usize>)> =
                self.roos.chains(deg).iter().enumerate().filter(|(_, c)| self.index[c[0]] >> y & 1 == 1).collect();
            let coherence_rows: Vec<Vec<usize>> = members.iter().copied().combinations(n + 1).collect();
            let cols = tuples.len() + lower.len();
            let rows = coherence_rows.len() + chains.len();
            let mut a = IntegerMatrix::zeros(rows, cols, coeff);
            let sign = |i: usize| coeff.reduce(BigInt::from(if i.is_multiple_of(2) { 1 } else { -1 }));
            for (row, t) in coherence_rows.iter().enumerate() {
                for i in 0..t.len() {
                    let mut face = t.clone();
                    face.remove(i);
                    a.set(row, tuple_col[&face], sign(i))?;
                }
            }
            for (j, (_, c)) in chains.iter().enumerate() {
                let row = coherence_rows.len() + j;
                a.set(row, tuple_col[*c], BigInt::one())?;
                // φ_c − (d w)_c
                if deg > 0 {
                    for i in 0..c.len() {
                        let mut face = (*c).clone();
                        face.remove(i);
                        a.set(row, lower_col[&face], coeff.reduce(-sign(i)))?;
                    }
                }
            }
            for comp in 0..r {
                let mut b = vec![BigInt::zero(); rows];
                for (j, (k, c)) in chains.iter().enumerate() {
                    let dom = self.index[c[0]] & keep;
                    b[coherence_rows.len() + j] = z[self.roos.offset(deg, *k) + position(dom, y) * r + comp].clone();
                }
                let Some(x) = solve_integer_system(&a, &b)? else {
                    return Err(CoherenceError::NoCoherentLift);
                };
                for (t, v) in tuples.iter().zip(&x) {
                    if v.is_zero() {
                        continue;
                    }
                    let dom = t.iter().fold(full_mask(self.modulus.ground()), |m, &i| m & self.index[i]);
                    let entry =
                        values.entry(t.clone()).or_insert_with(|| vec![BigInt::zero(); dom.count_ones() as usize * r]);
                    entry[position(dom, y) * r + comp] = v.clone();
                }
                for ((k, c), v) in lower.iter().zip(&x[tuples.len()..]) {
                    let dom = self.index[c[0]] & keep;
                    w_total[self.roos.offset(deg - 1, *k) + position(dom, y) * r + comp] = v.clone();
                }
            }
        }
        let mut fam = self.zero_family();
        for (t, v) in values {
            fam.set(&t, v)?;
        }
        let back = self.family_to_cocycle(&fam)?;
        let dw = if deg == 0 { vec![BigInt::zero(); back.len()] } else { self.coboundary(deg as i64 - 1, &w_total)? };
        let consistent = back.iter().zip(z).zip(&dw).all(|((b, z), d)| coeff.reduce(b - z - d).is_zero());
        if !consistent {
            return Err(CoherenceError::Verification("lifted family is not cohomologous to the cocycle".into()));
        }
        Ok(fam)
    }
}
