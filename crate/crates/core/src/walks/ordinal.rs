use std::fmt;
use std::str::FromStr;

use super::WalkError;

/// Ordinal below ω^ω in Cantor normal form `Σ ω^{e_i}·c_i`, exponents
/// strictly descending and coefficients positive.
///
/// The derived order compares the term lists lexicographically, which is the
/// ordinal order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OrdinalCNF {
    terms: Vec<(u32, u64)>,
}

impl OrdinalCNF {
    pub fn zero() -> Self {
        OrdinalCNF::default()
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalCNF { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    /// `ω^e`.
    pub fn omega_pow(e: u32) -> Self {
        OrdinalCNF { terms: vec![(e, 1)] }
    }

    /// `ω^e · c`.
    pub fn monomial(e: u32, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            OrdinalCNF { terms: vec![(e, c)] }
        }
    }

    /// Validated construction from `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, WalkError> {
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(WalkError::BadOrdinal("coefficients must be positive".into()));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(WalkError::BadOrdinal("exponents must be strictly descending".into()));
        }
        Ok(OrdinalCNF { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some(&(0, _)))
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(&(e, _)) if e > 0)
    }

    /// Value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    /// Splits off the finite part: `self = λ + k` with `λ` zero or a limit.
    pub fn split_finite(&self) -> (OrdinalCNF, u64) {
        match self.terms.last() {
            Some(&(0, k)) => (OrdinalCNF { terms: self.terms[..self.terms.len() - 1].to_vec() }, k),
            _ => (self.clone(), 0),
        }
    }

    pub fn succ(&self) -> OrdinalCNF {
        self.plus_nat(1)
    }

    pub fn plus_nat(&self, k: u64) -> OrdinalCNF {
        self.add(&OrdinalCNF::nat(k))
    }

    /// Immediate predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<OrdinalCNF> {
        let (lam, k) = self.split_finite();
        (k > 0).then(|| lam.plus_nat(k - 1))
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &OrdinalCNF) -> OrdinalCNF {
        let Some(&(lead, c)) = other.terms.first() else { return self.clone() };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().take_while(|&(e, _)| e > lead).collect();
        match self.terms.iter().find(|&&(e, _)| e == lead) {
            Some(&(_, d)) => terms.push((lead, d + c)),
            None => terms.push((lead, c)),
        }
        terms.extend_from_slice(&other.terms[1..]);
        OrdinalCNF { terms }
    }

    /// The unique `η` with `base + η = self`, for `base ≤ self`.
    pub fn left_sub(&self, base: &OrdinalCNF) -> Option<OrdinalCNF> {
        if base > self {
            return None;
        }
        let i = self.terms.iter().zip(&base.terms).take_while(|(a, b)| a == b).count();
        if i == base.terms.len() {
            return Some(OrdinalCNF { terms: self.terms[i..].to_vec() });
        }
        let (e, c) = self.terms[i];
        let (f, d) = base.terms[i];
        let mut terms = if e == f { vec![(e, c - d)] } else { vec![(e, c)] };
        terms.extend_from_slice(&self.terms[i + 1..]);
        Some(OrdinalCNF { terms })
    }

    /// Coefficient of `ω^e`.
    pub fn coefficient(&self, e: u32) -> u64 {
        self.terms.iter().find(|&&(f, _)| f == e).map_or(0, |&(_, c)| c)
    }

    /// Leading exponent; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|&(e, _)| e)
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(e, c)| match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".into(),
                (1, c) => format!("w*{c}"),
                (e, 1) => format!("w^{e}"),
                (e, c) => format!("w^{e}*{c}"),
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Parses sums of terms `k`, `w`, `w*c`, `w^e`, `w^e*c` (`ω` accepted for `w`).
impl FromStr for OrdinalCNF {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, WalkError> {
        let bad = || WalkError::BadOrdinal(format!("cannot parse ordinal {s:?}"));
        let s = s.replace('ω', "w").replace('·', "*").replace(' ', "");
        if s.is_empty() {
            return Err(bad());
        }
        let mut acc = OrdinalCNF::zero();
        for part in s.split('+') {
            let (head, coeff) = match part.split_once('*') {
                Some((h, c)) => (h, c.parse::<u64>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let term = if let Some(rest) = head.strip_prefix('w') {
                let e = match rest.strip_prefix('^') {
                    Some(e) => e.parse::<u32>().map_err(|_| bad())?,
                    None if rest.is_empty() => 1,
                    None => return Err(bad()),
                };
                OrdinalCNF::monomial(e, coeff)
            } else {
                if part.contains('*') {
                    return Err(bad());
                }
                OrdinalCNF::nat(head.parse::<u64>().map_err(|_| bad())?)
            };
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> OrdinalCNF {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w+3").add(&o("w*2")), o("w*3"));
        assert_eq!(o("w^2+w").add(&o("5")), o("w^2+w+5"));
        assert_eq!(o("w^2*2+w+1").left_sub(&o("w^2")), Some(o("w^2+w+1")));
        assert_eq!(o("w^2+w*3").left_sub(&o("w^2+w")), Some(o("w*2")));
        assert_eq!(o("w+4").pred(), Some(o("w+3")));
        assert_eq!(o("w").pred(), None);
    }

    #[test]
    fn order_and_classification() {
        assert!(o("w") > o("1000"));
        assert!(o("w^2") > o("w*7+9"));
        assert!(o("w^2+1") > o("w^2"));
        assert!(o("w*2").is_limit() && o("w+1").is_successor() && !o("0").is_limit());
        assert_eq!(o("w^3*2+w+4").to_string(), "w^3*2+w+4");
        assert_eq!(o("ω^2·3").to_string(), "w^2*3");
        assert!("w^".parse::<OrdinalCNF>().is_err());
        assert!(OrdinalCNF::from_terms(vec![(1, 1), (2, 1)]).is_err());
    }
}
