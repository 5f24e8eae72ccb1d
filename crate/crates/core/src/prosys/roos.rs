use std::collections::HashMap;

use crate::complex::{build_complex, CochainComplex};
use crate::zmodule::{Coeff, FinAbGroup, IntegerMatrix};

use super::{Caps, InverseSystem, SystemError};

/// Normalized Roos complex: degree `n` is `∏ term(x_0)` over strict chains
/// `x_0 < … < x_n`, with chain bookkeeping for building cochains by hand.
#[derive(Clone, Debug)]
pub struct RoosComplex {
    complex: CochainComplex,
    chains: Vec<Vec<Vec<usize>>>,
    offsets: Vec<Vec<usize>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl RoosComplex {
    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> CochainComplex {
        self.complex
    }

    /// Strict chains of length `n + 1`, in basis order.
    pub fn chains(&self, n: usize) -> &[Vec<usize>] {
        self.chains.get(n).map_or(&[], |c| c.as_slice())
    }

    /// Position of `chain`'s block in degree `n` (its offset and its index).
    pub fn locate(&self, chain: &[usize]) -> Option<(usize, usize)> {
        let n = chain.len().checked_sub(1)?;
        let k = *self.index.get(n)?.get(chain)?;
        Some((k, self.offsets[n][k]))
    }

    pub fn offset(&self, n: usize, k: usize) -> usize {
        self.offsets[n][k]
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.chains.len().checked_sub(1)
    }
}

/// Full normalized Roos complex.
pub fn roos_complex(s: &InverseSystem, caps: &Caps) -> Result<RoosComplex, SystemError> {
    build(s, None, caps)
}

/// Roos complex truncated above degree `top` (exact in degrees `< top`).
pub fn roos_complex_to_degree(s: &InverseSystem, top: usize, caps: &Caps) -> Result<RoosComplex, SystemError> {
    build(s, Some(top), caps)
}

fn build(s: &InverseSystem, top: Option<usize>, caps: &Caps) -> Result<RoosComplex, SystemError> {
    let poset = s.poset();
    let counts = poset.chain_counts();
    let keep = top.map_or(counts.len(), |t| counts.len().min(t + 1));
    let needed = counts[..keep].iter().fold(0u128, |a, &c| a.saturating_add(c));
    if needed > caps.max_chains as u128 {
        return Err(SystemError::ChainCapExceeded { cap: caps.max_chains, needed });
    }
    let mut chains = poset.strict_chains();
    chains.truncate(keep);
    let coeff = s.coeff();
    let mut offsets = Vec::with_capacity(keep);
    let mut index = Vec::with_capacity(keep);
    let mut ranks = Vec::with_capacity(keep);
    for level in &chains {
        let mut off = Vec::with_capacity(level.len());
        let mut acc = 0;
        let mut idx = HashMap::with_capacity(level.len());
        for (k, c) in level.iter().enumerate() {
            off.push(acc);
            acc += s.rank(c[0]);
            idx.insert(c.clone(), k);
        }
        offsets.push(off);
        index.push(idx);
        ranks.push(acc);
    }
    let mut diffs = Vec::with_capacity(keep.saturating_sub(1));
    for n in 0..keep.saturating_sub(1) {
        let mut d = IntegerMatrix::zeros(ranks[n + 1], ranks[n], coeff);
        for (k, c) in chains[n + 1].iter().enumerate() {
            let row = offsets[n + 1][k];
            let head = &c[1..];
            let col = offsets[n][index[n][head]];
            d.add_block(row, col, s.map(c[0], c[1]), 1);
            let id = IntegerMatrix::identity(s.rank(c[0]), coeff);
            for i in 1..c.len() {
                let mut face = c.clone();
                face.remove(i);
                let col = offsets[n][index[n][&face]];
                d.add_block(row, col, &id, if i % 2 == 0 { 1 } else { -1 });
            }
        }
        diffs.push(d);
    }
    let complex = build_complex(0, ranks, diffs, coeff)?;
    Ok(RoosComplex { complex, chains, offsets, index })
}

/// `lim^n s` as the `n`-th cohomology of the Roos complex. `lim^0` is
/// cross-checked against the kernel of the compatibility map.
pub fn derived_limit(s: &InverseSystem, n: i64, caps: &Caps) -> Result<FinAbGroup, SystemError> {
    if n < 0 {
        return Ok(FinAbGroup::trivial(s.coeff()));
    }
    let roos = roos_complex_to_degree(s, n as usize + 1, caps)?;
    let h = roos.complex().cohomology_at(n)?;
    if n == 0 {
        check_lim0(s, &h)?;
    }
    Ok(h)
}

/// `lim^0 … lim^{nmax}` from one Roos complex.
pub fn derived_limits(s: &InverseSystem, nmax: usize, caps: &Caps) -> Result<Vec<FinAbGroup>, SystemError> {
    let roos = roos_complex_to_degree(s, nmax + 1, caps)?;
    let out = (0..=nmax as i64).map(|n| roos.complex().cohomology_at(n)).collect::<Result<Vec<_>, _>>()?;
    check_lim0(s, &out[0])?;
    Ok(out)
}

fn check_lim0(s: &InverseSystem, h0: &FinAbGroup) -> Result<(), SystemError> {
    let k = s.limit_basis()?.cols();
    let direct = match s.coeff() {
        Coeff::Integers => FinAbGroup::free(Coeff::Integers, k),
        c => FinAbGroup::vector_space(c, k),
    };
    if &direct != h0 {
        return Err(SystemError::Verification(format!(
            "lim^0 from the Roos complex is {h0}, compatible families give {direct}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prosys::{build_system, Poset};

    fn z(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows, Coeff::Integers).unwrap()
    }

    fn v_poset() -> InverseSystem {
        let p = Poset::from_named(&["a", "b", "c"], &[("c", "a"), ("c", "b")]).unwrap();
        build_system(p, vec![0, 0, 1], vec![], Coeff::Integers).unwrap()
    }

    #[test]
    fn one_element() {
        let s = build_system(Poset::chain(1), vec![1], vec![], Coeff::Integers).unwrap();
        let r = roos_complex(&s, &Caps::default()).unwrap();
        assert_eq!(r.complex().rank_at(0), 1);
        assert_eq!(r.complex().rank_at(1), 0);
        assert_eq!(derived_limit(&s, 0, &Caps::default()).unwrap(), FinAbGroup::free(Coeff::Integers, 1));
        assert!(derived_limit(&s, 1, &Caps::default()).unwrap().is_trivial());
    }

    #[test]
    fn two_chain() {
        let p = Poset::from_named(&["c", "a"], &[("c", "a")]).unwrap();
        let s = build_system(p, vec![1, 1], vec![(0, 1, z(&[vec![1]]))], Coeff::Integers).unwrap();
        let r = roos_complex(&s, &Caps::default()).unwrap();
        assert_eq!(r.complex().rank_at(0), 2);
        assert_eq!(r.complex().rank_at(1), 1);
    }

    #[test]
    fn v_poset_lim1() {
        let s = v_poset();
        let caps = Caps::default();
        assert!(derived_limit(&s, 0, &caps).unwrap().is_trivial());
        assert_eq!(derived_limit(&s, 1, &caps).unwrap(), FinAbGroup::free(Coeff::Integers, 1));
        for p in [2, 3] {
            let sp = s.with_coeff(Coeff::ModP(p));
            assert_eq!(derived_limit(&sp, 1, &caps).unwrap(), FinAbGroup::vector_space(Coeff::ModP(p), 1));
        }
    }

    #[test]
    fn chain_cap() {
        let s = v_poset();
        let caps = Caps { max_chains: 4, ..Caps::default() };
        assert!(matches!(roos_complex(&s, &caps), Err(SystemError::ChainCapExceeded { cap: 4, needed: 5 })));
    }
}
