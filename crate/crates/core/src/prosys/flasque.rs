use crate::zmodule::{group_from_map, FinAbGroup, IntegerMatrix};

use super::{lattice, Caps, InverseSystem, SystemError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlasqueReport {
    pub flasque: bool,
    /// A down-set `Λ` on which `lim s → lim (s↾Λ)` is not surjective.
    pub witness: Option<Vec<usize>>,
    pub down_sets_checked: usize,
}

/// Cokernel of the restriction `lim s → lim (s↾Λ)` for a down-set `Λ`.
pub fn limit_restriction_cokernel(s: &InverseSystem, down_set: &[usize]) -> Result<FinAbGroup, SystemError> {
    let full = s.limit_basis()?;
    restriction_cokernel(s, &full, down_set)
}

fn restriction_cokernel(s: &InverseSystem, full: &IntegerMatrix, down_set: &[usize]) -> Result<FinAbGroup, SystemError> {
    let mut sorted = down_set.to_vec();
    sorted.sort_unstable();
    let sub = s.restrict(&sorted)?;
    let local = sub.limit_basis()?;
    let off = s.offsets();
    let rows: Vec<usize> = sorted.iter().flat_map(|&x| off[x]..off[x] + s.rank(x)).collect();
    let restricted = full.select_rows(&rows);
    let coords = lattice::coordinates(&local, &restricted)?.ok_or_else(|| {
        SystemError::Verification("restriction of a compatible family is not compatible".into())
    })?;
    Ok(group_from_map(&coords)?.1)
}

/// Exhaustive check over all down-sets of the poset.
pub fn is_flasque(s: &InverseSystem, caps: &Caps) -> Result<FlasqueReport, SystemError> {
    let n = s.poset().len();
    let needed: u128 = if n >= 127 { u128::MAX } else { 1u128 << n };
    if needed > caps.max_subsets as u128 {
        return Err(SystemError::SubsetCapExceeded { cap: caps.max_subsets, needed });
    }
    let poset = s.poset();
    let mut family = Vec::new();
    let mut member = vec![false; n];
    for mask in 1u64..(1u64 << n).saturating_sub(1) {
        for (i, m) in member.iter_mut().enumerate() {
            *m = mask >> i & 1 == 1;
        }
        if poset.is_down_set(&member) {
            family.push((0..n).filter(|&i| member[i]).collect::<Vec<_>>());
        }
    }
    check_family(s, &family)
}

/// Check on a caller-supplied family of subsets; each is replaced by its
/// downward closure first.
pub fn is_flasque_on(s: &InverseSystem, family: &[Vec<usize>]) -> Result<FlasqueReport, SystemError> {
    let poset = s.poset();
    let mut closed = Vec::with_capacity(family.len());
    for set in family {
        if let Some(&bad) = set.iter().find(|&&x| x >= poset.len()) {
            return Err(SystemError::UnknownIndex(bad));
        }
        let down: Vec<usize> = (0..poset.len()).filter(|&x| set.iter().any(|&y| poset.leq(x, y))).collect();
        closed.push(down);
    }
    check_family(s, &closed)
}

fn check_family(s: &InverseSystem, family: &[Vec<usize>]) -> Result<FlasqueReport, SystemError> {
    let full = s.limit_basis()?;
    for (i, set) in family.iter().enumerate() {
        if !restriction_cokernel(s, &full, set)?.is_trivial() {
            return Ok(FlasqueReport { flasque: false, witness: Some(set.clone()), down_sets_checked: i + 1 });
        }
    }
    Ok(FlasqueReport { flasque: true, witness: None, down_sets_checked: family.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prosys::{build_system, Poset};
    use crate::zmodule::Coeff;

    #[test]
    fn v_poset_witness() {
        let p = Poset::from_named(&["a", "b", "c"], &[("c", "a"), ("c", "b")]).unwrap();
        let s = build_system(p, vec![0, 0, 1], vec![], Coeff::Integers).unwrap();
        let r = is_flasque(&s, &Caps::default()).unwrap();
        assert!(!r.flasque);
        assert_eq!(r.witness, Some(vec![2]));
    }

    #[test]
    fn one_element_is_flasque() {
        let s = build_system(Poset::chain(1), vec![3], vec![], Coeff::Integers).unwrap();
        assert!(is_flasque(&s, &Caps::default()).unwrap().flasque);
    }

    #[test]
    fn multiplication_by_two_is_not_flasque() {
        let m = IntegerMatrix::from_rows(&[vec![2]], Coeff::Integers).unwrap();
        let s = build_system(Poset::chain(2), vec![1, 1], vec![(0, 1, m)], Coeff::Integers).unwrap();
        let r = is_flasque(&s, &Caps::default()).unwrap();
        assert_eq!(r.witness, Some(vec![0]));
        let c = limit_restriction_cokernel(&s, &[0]).unwrap();
        assert_eq!(c.to_string(), "Z/2");
    }

    #[test]
    fn subset_cap() {
        let s = build_system(Poset::chain(5), vec![0; 5], vec![], Coeff::Integers).unwrap();
        let caps = Caps { max_subsets: 16, ..Caps::default() };
        assert!(matches!(is_flasque(&s, &caps), Err(SystemError::SubsetCapExceeded { .. })));
    }
}
