use std::collections::HashMap;

use crate::zmodule::{Coeff, IntegerMatrix, ModuleMap};

use super::{lattice, Poset, SystemError};

/// Free module `R^{rank(x)}` at each poset element with transition maps
/// `p[x,y] : term(y) → term(x)` for every `x ≤ y`.
#[derive(Clone, Debug)]
pub struct InverseSystem {
    poset: Poset,
    ranks: Vec<usize>,
    maps: HashMap<(usize, usize), ModuleMap>,
    coeff: Coeff,
}

/// Validates the given maps, fills in missing ones by composition (and the
/// unique maps into or out of zero terms), then checks functoriality on every
/// triple.
pub fn build_system(
    poset: Poset,
    ranks: Vec<usize>,
    given: Vec<(usize, usize, ModuleMap)>,
    coeff: Coeff,
) -> Result<InverseSystem, SystemError> {
    let n = poset.len();
    if ranks.len() != n {
        return Err(SystemError::RankCount { expected: n, found: ranks.len() });
    }
    let name = |i: usize| poset.name(i).to_string();
    let mut maps: HashMap<(usize, usize), ModuleMap> = HashMap::new();
    for (x, y, m) in given {
        if x >= n || y >= n {
            return Err(SystemError::UnknownIndex(x.max(y)));
        }
        if !poset.leq(x, y) {
            return Err(SystemError::NotComparable { x: name(x), y: name(y) });
        }
        let m = match (m.coeff(), coeff) {
            (a, b) if a == b => m,
            (Coeff::Integers, Coeff::ModP(_)) => m.with_coeff(coeff),
            (found, expected) => return Err(SystemError::RingMismatch { expected, found }),
        };
        if m.rows() != ranks[x] || m.cols() != ranks[y] {
            return Err(SystemError::DimensionMismatch {
                x: name(x),
                y: name(y),
                expected_rows: ranks[x],
                expected_cols: ranks[y],
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if x == y && !m.is_identity() {
            return Err(SystemError::NotIdentity(name(x)));
        }
        maps.insert((x, y), m);
    }
    for x in 0..n {
        maps.entry((x, x)).or_insert_with(|| IntegerMatrix::identity(ranks[x], coeff));
    }
    let pairs = poset.strict_pairs();
    for &(x, y) in &pairs {
        if ranks[x] == 0 || ranks[y] == 0 {
            maps.entry((x, y)).or_insert_with(|| IntegerMatrix::zeros(ranks[x], ranks[y], coeff));
        }
    }
    loop {
        let mut progress = false;
        let mut missing = false;
        for &(x, y) in &pairs {
            if maps.contains_key(&(x, y)) {
                continue;
            }
            let via = (0..n).find(|&z| {
                poset.lt(x, z) && poset.lt(z, y) && maps.contains_key(&(x, z)) && maps.contains_key(&(z, y))
            });
            match via {
                Some(z) => {
                    let m = maps[&(x, z)].mul(&maps[&(z, y)])?;
                    maps.insert((x, y), m);
                    progress = true;
                }
                None => missing = true,
            }
        }
        if !missing {
            break;
        }
        if !progress {
            let &(x, y) = pairs.iter().find(|p| !maps.contains_key(p)).expect("some pair is missing");
            return Err(SystemError::MissingMap { x: name(x), y: name(y) });
        }
    }
    for &(x, y) in &pairs {
        for z in poset.strictly_above(y) {
            let composed = maps[&(x, y)].mul(&maps[&(y, z)])?;
            if composed != maps[&(x, z)] {
                return Err(SystemError::NotFunctorial { x: name(x), y: name(y), z: name(z) });
            }
        }
    }
    Ok(InverseSystem { poset, ranks, maps, coeff })
}

impl InverseSystem {
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `p[x,y]` for `x ≤ y`.
    pub fn map(&self, x: usize, y: usize) -> &ModuleMap {
        self.maps.get(&(x, y)).unwrap_or_else(|| panic!("no map for {x} <= {y}"))
    }

    /// Coordinate offset of each term inside `⊕_x term(x)`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.ranks.len());
        let mut acc = 0;
        for &r in &self.ranks {
            off.push(acc);
            acc += r;
        }
        off
    }

    /// The same system with every map reduced modulo `p`.
    pub fn with_coeff(&self, coeff: Coeff) -> InverseSystem {
        InverseSystem {
            poset: self.poset.clone(),
            ranks: self.ranks.clone(),
            maps: self.maps.iter().map(|(k, m)| (*k, m.with_coeff(coeff))).collect(),
            coeff,
        }
    }

    /// The subsystem on `subset` (indices into this poset, in the given order).
    pub fn restrict(&self, subset: &[usize]) -> Result<InverseSystem, SystemError> {
        let mut seen = vec![false; self.poset.len()];
        for &x in subset {
            if x >= self.poset.len() {
                return Err(SystemError::UnknownIndex(x));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(SystemError::DuplicateElement(self.poset.name(x).to_string()));
            }
        }
        let poset = self.poset.induced(subset);
        let ranks = subset.iter().map(|&x| self.ranks[x]).collect();
        let mut maps = HashMap::new();
        for (a, &x) in subset.iter().enumerate() {
            for (b, &y) in subset.iter().enumerate() {
                if self.poset.leq(x, y) {
                    maps.insert((a, b), self.maps[&(x, y)].clone());
                }
            }
        }
        Ok(InverseSystem { poset, ranks, maps, coeff: self.coeff })
    }

    /// `⊕_x term(x) → ⊕_{x ⋖ y} term(x)`, `s ↦ (s_x − p[x,y] s_y)`, whose
    /// kernel is `lim`. Covering pairs suffice because maps compose.
    pub fn compatibility_map(&self) -> IntegerMatrix {
        let covers = self.poset.covers();
        let off = self.offsets();
        let rows: usize = covers.iter().map(|&(x, _)| self.ranks[x]).sum();
        let mut m = IntegerMatrix::zeros(rows, self.total_rank(), self.coeff);
        let mut r = 0;
        for &(x, y) in &covers {
            m.add_block(r, off[x], &IntegerMatrix::identity(self.ranks[x], self.coeff), 1);
            m.add_block(r, off[y], self.map(x, y), -1);
            r += self.ranks[x];
        }
        m
    }

    /// Basis of `lim` as columns in `⊕_x term(x)` coordinates.
    pub fn limit_basis(&self) -> Result<IntegerMatrix, SystemError> {
        Ok(lattice::kernel(&self.compatibility_map())?)
    }
}

/// Restriction to a subset; derived limits are unchanged when the poset is
/// directed and the subset cofinal.
pub fn restrict_cofinal(s: &InverseSystem, subset: &[usize]) -> Result<InverseSystem, SystemError> {
    s.restrict(subset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows, Coeff::Integers).unwrap()
    }

    #[test]
    fn one_element() {
        let p = Poset::chain(1);
        let s = build_system(p, vec![1], vec![], Coeff::Integers).unwrap();
        assert!(s.map(0, 0).is_identity());
    }

    #[test]
    fn fills_by_composition() {
        let p = Poset::chain(3);
        let s = build_system(
            p,
            vec![1, 1, 1],
            vec![(0, 1, z(&[vec![2]])), (1, 2, z(&[vec![3]]))],
            Coeff::Integers,
        )
        .unwrap();
        assert_eq!(s.map(0, 2), &z(&[vec![6]]));
    }

    #[test]
    fn non_functorial_closure_pair() {
        let p = Poset::chain(3);
        let r = build_system(
            p,
            vec![1, 1, 1],
            vec![(0, 1, z(&[vec![1]])), (1, 2, z(&[vec![1]])), (0, 2, z(&[vec![2]]))],
            Coeff::Integers,
        );
        assert!(matches!(r, Err(SystemError::NotFunctorial { .. })));
    }

    #[test]
    fn missing_and_bad_maps() {
        let p = Poset::from_named(&["a", "b"], &[("a", "b")]).unwrap();
        let r = build_system(p.clone(), vec![1, 1], vec![], Coeff::Integers);
        assert!(matches!(r, Err(SystemError::MissingMap { .. })));
        let r = build_system(p.clone(), vec![1, 2], vec![(0, 1, z(&[vec![1]]))], Coeff::Integers);
        assert!(matches!(r, Err(SystemError::DimensionMismatch { .. })));
        let r = build_system(p, vec![1, 1], vec![(1, 0, z(&[vec![1]]))], Coeff::Integers);
        assert!(matches!(r, Err(SystemError::NotComparable { .. })));
    }

    #[test]
    fn restriction_to_whole_poset_is_identical() {
        let p = Poset::chain(2);
        let s = build_system(p, vec![1, 2], vec![(0, 1, z(&[vec![1, 1]]))], Coeff::Integers).unwrap();
        let r = restrict_cofinal(&s, &[0, 1]).unwrap();
        assert_eq!(r.ranks(), s.ranks());
        assert_eq!(r.map(0, 1), s.map(0, 1));
        assert_eq!(r.poset(), s.poset());
    }
}
