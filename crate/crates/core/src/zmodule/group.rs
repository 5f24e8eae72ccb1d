use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::{Coeff, IntegerMatrix};
use super::smith::invariant_factors;
use super::ZError;

/// Finitely generated module over ℤ or ℤ/p in invariant-factor normal form.
///
/// Over ℤ: `ℤ^free_rank ⊕ ℤ/t_1 ⊕ … ⊕ ℤ/t_k` with `t_i ≥ 2` and `t_i | t_{i+1}`.
/// Over ℤ/p the torsion list is always empty and `free_rank` is the dimension.
/// Structural equality is isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinAbGroup {
    coeff: Coeff,
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial(coeff: Coeff) -> Self {
        FinAbGroup { coeff, free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(coeff: Coeff, rank: usize) -> Self {
        FinAbGroup { coeff, free_rank: rank, torsion: Vec::new() }
    }

    pub fn vector_space(coeff: Coeff, dim: usize) -> Self {
        Self::free(coeff, dim)
    }

    /// Canonicalizes an arbitrary list of cyclic orders: zeros become free
    /// summands, units are dropped, and the rest is brought into a
    /// divisibility chain.
    pub fn from_invariant_factors(coeff: Coeff, free_rank: usize, factors: Vec<BigInt>) -> Result<Self, ZError> {
        let mut free = free_rank;
        let mut rest = Vec::new();
        for f in factors {
            let f = f.abs();
            if f.is_zero() {
                free += 1;
            } else if !f.is_one() {
                rest.push(f);
            }
        }
        if coeff.is_field() {
            // ℤ/p-modules: nonzero non-unit orders do not occur as field quotients
            if !rest.is_empty() {
                return Err(ZError::Internal("torsion factor in a vector space".into()));
            }
            return Ok(Self::free(coeff, free));
        }
        let chain_ok = rest.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let torsion = if chain_ok {
            rest
        } else {
            let diag = IntegerMatrix::diagonal(rest.len(), rest.len(), &rest, Coeff::Integers);
            invariant_factors(&diag)?.into_iter().filter(|d| !d.is_one()).collect()
        };
        Ok(FinAbGroup { coeff, free_rank: free, torsion })
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of invariant factors divisible by `p`.
    pub fn p_divisible_factors(&self, p: u32) -> usize {
        let p = BigInt::from(p);
        self.torsion.iter().filter(|t| (*t % &p).is_zero()).count()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let base = match self.coeff {
            Coeff::Integers => "Z".to_string(),
            Coeff::ModP(p) => format!("(Z/{p})"),
        };
        match self.free_rank {
            0 => {}
            1 => parts.push(base),
            r => parts.push(format!("{base}^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, t: &[i64]) -> FinAbGroup {
        FinAbGroup::from_invariant_factors(Coeff::Integers, free, t.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(g(0, &[1, 1, 0, 2]), g(1, &[2]));
        assert_eq!(g(0, &[2, 3]), g(0, &[6]));
        assert_eq!(g(0, &[4, 6]), g(0, &[2, 12]));
        assert!(g(0, &[1, -1]).is_trivial());
    }

    #[test]
    fn display() {
        assert_eq!(g(4, &[]).to_string(), "Z^4");
        assert_eq!(g(1, &[2, 6]).to_string(), "Z + Z/2 + Z/6");
        assert_eq!(g(0, &[]).to_string(), "0");
        assert_eq!(FinAbGroup::vector_space(Coeff::ModP(2), 3).to_string(), "(Z/2)^3");
    }
}
