//! Cochain complexes of finite-rank free modules, graded cohomologically.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::zmodule::{self, Coeff, FinAbGroup, IntegerMatrix, IntegerSolver, ModuleMap, ZError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential d^{degree} should be {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    DimensionMismatch { degree: i64, expected_rows: usize, expected_cols: usize, rows: usize, cols: usize },
    #[error("d^{} ∘ d^{degree} is nonzero: entry ({row}, {col}) = {value}", degree + 1)]
    NotAComplex { degree: i64, row: usize, col: usize, value: BigInt },
    #[error("differential d^{degree} is over {found}, complex is over {expected}")]
    RingMismatch { degree: i64, expected: Coeff, found: Coeff },
    #[error("expected {expected} differentials for {ranks} degrees, got {found}")]
    DifferentialCount { ranks: usize, expected: usize, found: usize },
    #[error(transparent)]
    Linear(#[from] ZError),
}

/// A bounded cochain complex `C^s → C^{s+1} → … → C^{s+k}` of free modules.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    start: i64,
    ranks: Vec<usize>,
    diffs: Vec<ModuleMap>,
    coeff: Coeff,
}

/// Validates dimensions and `d ∘ d = 0`; `diffs[i]` maps degree `start + i`
/// to degree `start + i + 1`.
pub fn build_complex(
    start: i64,
    ranks: Vec<usize>,
    diffs: Vec<ModuleMap>,
    coeff: Coeff,
) -> Result<CochainComplex, ComplexError> {
    let expected = ranks.len().saturating_sub(1);
    if diffs.len() != expected {
        return Err(ComplexError::DifferentialCount { ranks: ranks.len(), expected, found: diffs.len() });
    }
    for (i, d) in diffs.iter().enumerate() {
        let degree = start + i as i64;
        if d.coeff() != coeff {
            return Err(ComplexError::RingMismatch { degree, expected: coeff, found: d.coeff() });
        }
        if d.rows() != ranks[i + 1] || d.cols() != ranks[i] {
            return Err(ComplexError::DimensionMismatch {
                degree,
                expected_rows: ranks[i + 1],
                expected_cols: ranks[i],
                rows: d.rows(),
                cols: d.cols(),
            });
        }
    }
    for (i, pair) in diffs.windows(2).enumerate() {
        let dd = pair[1].mul(&pair[0])?;
        if let Some((row, col, value)) = first_nonzero(&dd) {
            return Err(ComplexError::NotAComplex { degree: start + i as i64, row, col, value });
        }
    }
    Ok(CochainComplex { start, ranks, diffs, coeff })
}

fn first_nonzero(m: &IntegerMatrix) -> Option<(usize, usize, BigInt)> {
    for i in 0..m.rows() {
        for (j, x) in m.row(i).iter().enumerate() {
            if !x.is_zero() {
                return Some((i, j, x.clone()));
            }
        }
    }
    None
}

impl CochainComplex {
    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    /// Lowest degree carrying a (possibly zero-rank) term.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Degrees `start ..= top`; empty for the empty complex.
    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.start..self.start + self.ranks.len() as i64
    }

    pub fn rank_at(&self, n: i64) -> usize {
        self.index(n).map_or(0, |i| self.ranks[i])
    }

    fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.start;
        (i >= 0 && (i as usize) < self.ranks.len()).then_some(i as usize)
    }

    /// `d^n : C^n → C^{n+1}`; the zero map outside the stored range.
    pub fn differential_at(&self, n: i64) -> ModuleMap {
        match self.index(n) {
            Some(i) if i < self.diffs.len() => self.diffs[i].clone(),
            _ => IntegerMatrix::zeros(self.rank_at(n + 1), self.rank_at(n), self.coeff),
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `H^n = ker d^n / im d^{n-1}` in invariant-factor form.
    pub fn cohomology_at(&self, n: i64) -> Result<FinAbGroup, ZError> {
        let dim = self.rank_at(n);
        if dim == 0 {
            return Ok(FinAbGroup::trivial(self.coeff));
        }
        let d_out = self.differential_at(n);
        let d_in = self.differential_at(n - 1);
        match self.coeff {
            Coeff::ModP(_) => {
                let r_out = zmodule::rank(&d_out)?;
                let r_in = zmodule::rank(&d_in)?;
                Ok(FinAbGroup::vector_space(self.coeff, dim - r_out - r_in))
            }
            Coeff::Integers => {
                // present ker d^n as a free module and im d^{n-1} inside it
                let kernel = if d_out.is_zero() {
                    IntegerMatrix::identity(dim, Coeff::Integers)
                } else {
                    IntegerSolver::new(&d_out)?.kernel_basis()
                };
                let k = kernel.cols();
                if k == 0 {
                    return Ok(FinAbGroup::trivial(self.coeff));
                }
                let image_cols: Vec<usize> =
                    (0..d_in.cols()).filter(|&j| (0..d_in.rows()).any(|i| !d_in.row(i)[j].is_zero())).collect();
                if image_cols.is_empty() {
                    return Ok(FinAbGroup::free(self.coeff, k));
                }
                let solver = IntegerSolver::new(&kernel)?;
                let mut coords = Vec::with_capacity(image_cols.len());
                for &j in &image_cols {
                    let c = d_in.column(j);
                    let a = solver.solve(&c)?.ok_or_else(|| {
                        ZError::Internal(format!("image column {j} of d^{} is not a cocycle", n - 1))
                    })?;
                    coords.push(a);
                }
                let presentation = IntegerMatrix::from_columns(k, &coords, Coeff::Integers);
                let (_, coker) = zmodule::group_from_map(&presentation)?;
                Ok(coker)
            }
        }
    }

    /// Cohomology in every stored degree.
    pub fn cohomology(&self) -> Result<Vec<(i64, FinAbGroup)>, ZError> {
        self.degrees().map(|n| Ok((n, self.cohomology_at(n)?))).collect()
    }

    /// `Σ (-1)^n rank C^n`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| sign(n) * self.rank_at(n) as i64).sum()
    }

    /// The same complex with entries reduced into another ring.
    pub fn with_coeff(&self, coeff: Coeff) -> CochainComplex {
        CochainComplex {
            start: self.start,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.with_coeff(coeff)).collect(),
            coeff,
        }
    }
}

pub(crate) fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
