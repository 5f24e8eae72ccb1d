use super::ordinal::OrdinalCNF;

/// Assigns to each limit `γ` a cofinal sequence `C_γ = ⟨γ[n] : n < ω⟩`,
/// strictly increasing with supremum `γ`. Successors use `C_{α+1} = {α}`.
pub trait LadderSystem: Send + Sync {
    fn name(&self) -> &str;

    /// `γ[n]` for a limit `γ`.
    fn term(&self, gamma: &OrdinalCNF, n: u64) -> OrdinalCNF;

    /// `(|C_γ ∩ ξ|, min(C_γ ∖ ξ))` for a limit `γ` and `ξ < γ`.
    fn split(&self, gamma: &OrdinalCNF, xi: &OrdinalCNF) -> (u64, OrdinalCNF) {
        let mut n = 0;
        loop {
            let t = self.term(gamma, n);
            if &t >= xi {
                return (n, t);
            }
            n += 1;
        }
    }
}

/// For `γ = δ + ω^m` with `m ≥ 1`: `γ[n] = δ + ω^{m-1}·n`. In particular
/// `C_ω = ⟨0, 1, 2, …⟩`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalLadders;

impl CanonicalLadders {
    /// `(δ, m)` with `γ = δ + ω^m`.
    fn decompose(gamma: &OrdinalCNF) -> (OrdinalCNF, u32) {
        let terms = gamma.terms();
        let &(m, c) = terms.last().expect("limit ordinal is nonzero");
        let mut head = terms[..terms.len() - 1].to_vec();
        if c > 1 {
            head.push((m, c - 1));
        }
        (OrdinalCNF::from_terms(head).expect("prefix of a normal form"), m)
    }
}

impl LadderSystem for CanonicalLadders {
    fn name(&self) -> &str {
        "canonical"
    }

    fn term(&self, gamma: &OrdinalCNF, n: u64) -> OrdinalCNF {
        debug_assert!(gamma.is_limit());
        let (delta, m) = Self::decompose(gamma);
        delta.add(&OrdinalCNF::monomial(m - 1, n))
    }

    fn split(&self, gamma: &OrdinalCNF, xi: &OrdinalCNF) -> (u64, OrdinalCNF) {
        debug_assert!(gamma.is_limit() && xi < gamma);
        let (delta, m) = Self::decompose(gamma);
        let count = match xi.left_sub(&delta) {
            None => 0,
            Some(eta) => {
                // η < ω^m, so its leading exponent is at most m - 1
                let a = eta.coefficient(m - 1);
                let rest = eta.terms().iter().any(|&(e, _)| e < m - 1);
                a + u64::from(rest)
            }
        };
        (count, delta.add(&OrdinalCNF::monomial(m - 1, count)))
    }
}
