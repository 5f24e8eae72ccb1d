use std::collections::HashMap;
use std::rc::Rc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::zmodule::{IntegerMatrix, IntegerSolver};

use super::family::{alternating_sum, is_n_coherent, position, CoherentFamily};
use super::ideal::elements;
use super::CoherenceError;

/// A trivialization: one function `ψ : Y → H` for `n = 1`, an
/// `(n-1)`-dimensional family otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trivialization {
    /// Values indexed by `y · rank + k` over the whole ground set.
    Function(Vec<BigInt>),
    Family(CoherentFamily),
}

struct Local {
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
    solver: IntegerSolver,
}

/// Precomputed linear systems for trivializing many families that share an
/// index list, modulus, target and dimension.
///
/// The condition decouples over coordinates `(y, k)` with `y ∉ J_max`: at each
/// such coordinate it is `δψ = φ` on the simplex of list members containing `y`.
pub struct TrivializationProblem {
    template: CoherentFamily,
    locals: Vec<(usize, Rc<Local>)>,
}

impl TrivializationProblem {
    /// Uses `template` only for its dimension, index list, target and modulus.
    pub fn new(template: &CoherentFamily) -> Result<Self, CoherenceError> {
        let n = template.n();
        let jmax = template.modulus().jmax();
        let index = template.index();
        let coeff = template.target().coeff;
        let mut cache: HashMap<Vec<usize>, Rc<Local>> = HashMap::new();
        let mut locals = Vec::new();
        for y in 0..template.ground() {
            if jmax >> y & 1 == 1 {
                continue;
            }
            let members: Vec<usize> = (0..index.len()).filter(|&i| index[i] >> y & 1 == 1).collect();
            if members.is_empty() {
                continue;
            }
            let local = match cache.get(&members) {
                Some(l) => Rc::clone(l),
                None => {
                    let rows: Vec<Vec<usize>> = members.iter().copied().combinations(n).collect();
                    let cols: Vec<Vec<usize>> = members.iter().copied().combinations(n - 1).collect();
                    let col_of: HashMap<&Vec<usize>, usize> = cols.iter().enumerate().map(|(j, c)| (c, j)).collect();
                    let mut m = IntegerMatrix::zeros(rows.len(), cols.len(), coeff);
                    for (r, t) in rows.iter().enumerate() {
                        for i in 0..t.len() {
                            let mut face = t.clone();
                            face.remove(i);
                            let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                            m.set(r, col_of[&face], coeff.reduce(BigInt::from(sign)))?;
                        }
                    }
                    let l = Rc::new(Local { rows, cols, solver: IntegerSolver::new(&m)? });
                    cache.insert(members, Rc::clone(&l));
                    l
                }
            };
            locals.push((y, local));
        }
        let template = CoherentFamily::zero(n, index.to_vec(), template.target(), template.modulus().clone())?;
        Ok(TrivializationProblem { template, locals })
    }

    fn compatible(&self, fam: &CoherentFamily) -> bool {
        fam.n() == self.template.n()
            && fam.index() == self.template.index()
            && fam.target() == self.template.target()
            && fam.modulus() == self.template.modulus()
    }

    /// Some trivialization of a coherent `fam`, re-verified by direct
    /// evaluation, or `None` if there is none.
    pub fn solve(&self, fam: &CoherentFamily) -> Result<Option<Trivialization>, CoherenceError> {
        if !self.compatible(fam) {
            return Err(CoherenceError::BadInput("family does not match the trivialization problem".into()));
        }
        let check = is_n_coherent(fam);
        if let Some(w) = check.witness {
            return Err(CoherenceError::NotCoherent { tuple: w.tuple, element: w.element });
        }
        let n = fam.n();
        let rank = fam.target().rank;
        let ground = fam.ground();
        let mut function = vec![BigInt::zero(); ground * rank];
        let mut psi: HashMap<Vec<usize>, Vec<BigInt>> = HashMap::new();
        for (y, local) in &self.locals {
            for k in 0..rank {
                let b: Vec<BigInt> = local.rows.iter().map(|t| fam.stored_at(t, *y, k)).collect();
                let Some(x) = local.solver.solve(&b)? else { return Ok(None) };
                if n == 1 {
                    function[y * rank + k] = x[0].clone();
                    continue;
                }
                for (c, v) in local.cols.iter().zip(x) {
                    if v.is_zero() {
                        continue;
                    }
                    let dom = fam.domain(c);
                    let entry =
                        psi.entry(c.clone()).or_insert_with(|| vec![BigInt::zero(); dom.count_ones() as usize * rank]);
                    entry[position(dom, *y) * rank + k] = v;
                }
            }
        }
        let triv = if n == 1 {
            Trivialization::Function(function)
        } else {
            let mut f =
                CoherentFamily::zero(n - 1, fam.index().to_vec(), fam.target(), fam.modulus().clone())?;
            for (t, v) in psi {
                f.set(&t, v)?;
            }
            Trivialization::Family(f)
        };
        if !verify_trivialization(fam, &triv) {
            return Err(CoherenceError::Verification("trivialization failed direct evaluation".into()));
        }
        Ok(Some(triv))
    }
}

/// Solves the trivialization system for a coherent family.
pub fn find_trivialization(fam: &CoherentFamily) -> Result<Option<Trivialization>, CoherenceError> {
    TrivializationProblem::new(fam)?.solve(fam)
}

/// Direct evaluation of the triviality condition modulo `J_max`.
pub fn verify_trivialization(fam: &CoherentFamily, triv: &Trivialization) -> bool {
    let jmax = fam.modulus().jmax();
    let rank = fam.target().rank;
    let coeff = fam.target().coeff;
    match triv {
        Trivialization::Function(psi) => {
            if fam.n() != 1 || psi.len() != fam.ground() * rank {
                return false;
            }
            (0..fam.index().len()).all(|i| {
                elements(fam.index()[i] & !jmax).all(|y| {
                    (0..rank).all(|k| coeff.reduce(&psi[y * rank + k] - fam.stored_at(&[i], y, k)).is_zero())
                })
            })
        }
        Trivialization::Family(psi) => {
            if psi.n() + 1 != fam.n() || psi.index() != fam.index() || psi.target() != fam.target() {
                return false;
            }
            fam.tuples(fam.n()).all(|t| {
                elements(fam.domain(&t) & !jmax).all(|y| {
                    (0..rank).all(|k| coeff.reduce(alternating_sum(psi, &t, y, k) - fam.stored_at(&t, y, k)).is_zero())
                })
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{build_ideal, Target};
    use crate::zmodule::Coeff;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_family() {
        let j = build_ideal(3, &[vec![2]]).unwrap();
        for n in 1..=2 {
            let f = CoherentFamily::zero(n, vec![0b011, 0b110], Target::new(Coeff::Integers, 1), j.clone()).unwrap();
            let t = find_trivialization(&f).unwrap().unwrap();
            match t {
                Trivialization::Function(v) => assert!(v.iter().all(Zero::is_zero)),
                Trivialization::Family(g) => assert!(g.is_zero()),
            }
        }
    }

    #[test]
    fn glued_antichain() {
        let j = build_ideal(3, &[]).unwrap();
        let mut f = CoherentFamily::zero(1, vec![0b011, 0b110], Target::new(Coeff::Integers, 1), j).unwrap();
        f.set(&[0], ints(&[5, 3])).unwrap();
        f.set(&[1], ints(&[3, 7])).unwrap();
        let Some(Trivialization::Function(psi)) = find_trivialization(&f).unwrap() else { panic!() };
        assert_eq!(psi, ints(&[5, 3, 7]));
    }

    #[test]
    fn improper_modulus_trivializes_anything() {
        let j = build_ideal(2, &[vec![0, 1]]).unwrap();
        let mut f = CoherentFamily::zero(1, vec![0b01, 0b11], Target::new(Coeff::Integers, 1), j).unwrap();
        f.set(&[0], ints(&[9])).unwrap();
        f.set(&[1], ints(&[1, 2])).unwrap();
        let Some(Trivialization::Function(psi)) = find_trivialization(&f).unwrap() else { panic!() };
        assert!(psi.iter().all(Zero::is_zero));
    }

    #[test]
    fn incoherent_rejected() {
        let j = build_ideal(3, &[]).unwrap();
        let mut f = CoherentFamily::zero(1, vec![0b011, 0b110], Target::new(Coeff::Integers, 1), j).unwrap();
        f.set(&[0], ints(&[5, 3])).unwrap();
        assert!(matches!(find_trivialization(&f), Err(CoherenceError::NotCoherent { .. })));
    }

    #[test]
    fn two_dimensional_coboundary() {
        let j = build_ideal(2, &[]).unwrap();
        let t = Target::new(Coeff::Integers, 1);
        let index = vec![0b01, 0b11, 0b10];
        let mut psi = CoherentFamily::zero(1, index.clone(), t, j.clone()).unwrap();
        psi.set(&[0], ints(&[2])).unwrap();
        psi.set(&[1], ints(&[5, -1])).unwrap();
        psi.set(&[2], ints(&[4])).unwrap();
        let mut f = CoherentFamily::zero(2, index, t, j).unwrap();
        for pair in [[0usize, 1], [0, 2], [1, 2]] {
            let dom = f.domain(&pair);
            let v: Vec<BigInt> = elements(dom)
                .map(|y| psi.stored_at(&[pair[1]], y, 0) - psi.stored_at(&[pair[0]], y, 0))
                .collect();
            f.set(&pair, v).unwrap();
        }
        assert!(is_n_coherent(&f).coherent);
        let triv = find_trivialization(&f).unwrap().unwrap();
        assert!(verify_trivialization(&f, &triv));
    }
}
