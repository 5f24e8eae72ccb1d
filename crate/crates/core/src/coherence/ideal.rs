use std::fmt;

use super::CoherenceError;

/// Largest supported ground set; subsets are stored as `u64` bitmasks.
pub const MAX_GROUND: usize = 64;

pub(crate) fn elements(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

pub(crate) fn mask_of(elems: &[usize]) -> u64 {
    elems.iter().fold(0, |m, &e| m | 1 << e)
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `{a,b,c}` notation for a bitmask.
pub fn set_name(mask: u64) -> String {
    let items: Vec<String> = elements(mask).map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Ideal on the ground set `{0, …, ground-1}` generated by finitely many
/// subsets. On a finite ground set it is the powerset of `J_max`, the union
/// of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetIdeal {
    ground: usize,
    generators: Vec<u64>,
    jmax: u64,
}

pub fn build_ideal(ground: usize, generators: &[Vec<usize>]) -> Result<SetIdeal, CoherenceError> {
    if ground > MAX_GROUND {
        return Err(CoherenceError::GroundTooLarge(ground));
    }
    let mut masks = Vec::with_capacity(generators.len());
    for (g, gen) in generators.iter().enumerate() {
        if let Some(&e) = gen.iter().find(|&&e| e >= ground) {
            return Err(CoherenceError::GeneratorOutOfGround { generator: g, element: e });
        }
        masks.push(mask_of(gen));
    }
    Ok(SetIdeal::from_masks(ground, masks))
}

impl SetIdeal {
    pub(crate) fn from_masks(ground: usize, generators: Vec<u64>) -> Self {
        let jmax = generators.iter().fold(0, |a, &g| a | g);
        SetIdeal { ground, generators, jmax }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn jmax(&self) -> u64 {
        self.jmax
    }

    pub fn contains(&self, set: u64) -> bool {
        set & !self.jmax == 0
    }

    /// `Y ∈ J`: every coherence condition modulo this ideal is vacuous.
    pub fn is_improper(&self) -> bool {
        self.jmax == full_mask(self.ground)
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.is_improper() && self.ground > 0 {
            vec!["modulus ideal contains the whole ground set; coherence conditions are vacuous".into()]
        } else {
            Vec::new()
        }
    }

    /// Distinct generators sorted by bitmask value (a linear extension of ⊆).
    pub fn generator_list(&self) -> Vec<u64> {
        let mut l = self.generators.clone();
        l.sort_unstable();
        l.dedup();
        l
    }
}

impl fmt::Display for SetIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|&g| set_name(g)).collect();
        write!(f, "ideal on {} points generated by [{}], J_max = {}", self.ground, gens.join(", "), set_name(self.jmax))
    }
}

/// `f : κ → P(λ)` with `X(f) = {(i, j) : j ∈ f(i)}`, encoded in `κ × λ` as
/// `i·λ + j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexedFunction {
    kappa: usize,
    lambda: usize,
    rows: Vec<u64>,
}

impl IndexedFunction {
    pub fn new(kappa: usize, lambda: usize, rows: Vec<Vec<usize>>) -> Result<Self, CoherenceError> {
        if kappa * lambda > MAX_GROUND {
            return Err(CoherenceError::GroundTooLarge(kappa * lambda));
        }
        if rows.len() != kappa {
            return Err(CoherenceError::BadInput(format!("expected {kappa} rows, got {}", rows.len())));
        }
        let mut masks = Vec::with_capacity(kappa);
        for (i, r) in rows.iter().enumerate() {
            if let Some(&j) = r.iter().find(|&&j| j >= lambda) {
                return Err(CoherenceError::GeneratorOutOfGround { generator: i, element: j });
            }
            masks.push(mask_of(r));
        }
        Ok(IndexedFunction { kappa, lambda, rows: masks })
    }

    /// Inverse of [`IndexedFunction::x_mask`].
    pub fn from_mask(kappa: usize, lambda: usize, mask: u64) -> Self {
        let row_mask = full_mask(lambda);
        let rows = (0..kappa).map(|i| mask >> (i * lambda) & row_mask).collect();
        IndexedFunction { kappa, lambda, rows }
    }

    pub fn value(&self, i: usize) -> Vec<usize> {
        elements(self.rows[i]).collect()
    }

    /// `X(f)` as a subset of `κ × λ`.
    pub fn x_mask(&self) -> u64 {
        self.rows.iter().enumerate().fold(0, |m, (i, &r)| m | r << (i * self.lambda))
    }

    pub fn leq(&self, other: &IndexedFunction) -> bool {
        self.x_mask() & !other.x_mask() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jmax_examples() {
        let i = build_ideal(3, &[vec![0], vec![1]]).unwrap();
        assert_eq!(i.jmax(), 0b011);
        assert!(!i.is_improper());
        let all = build_ideal(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(all.is_improper());
        assert_eq!(all.warnings().len(), 1);
        let empty = build_ideal(3, &[]).unwrap();
        assert_eq!(empty.jmax(), 0);
        assert!(matches!(build_ideal(2, &[vec![2]]), Err(CoherenceError::GeneratorOutOfGround { .. })));
    }

    #[test]
    fn indexed_functions() {
        let f = IndexedFunction::new(2, 2, vec![vec![0], vec![]]).unwrap();
        let g = IndexedFunction::new(2, 2, vec![vec![0, 1], vec![1]]).unwrap();
        assert!(f.leq(&g) && !g.leq(&f));
        assert_eq!(IndexedFunction::from_mask(2, 2, g.x_mask()), g);
        assert_eq!(set_name(g.x_mask()), "{0,1,3}");
    }
}
