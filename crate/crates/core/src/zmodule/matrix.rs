use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ZError;

/// Coefficient ring of a matrix, complex or system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Integers,
    /// ℤ/p for a prime `p`. Construct through [`Coeff::mod_prime`].
    ModP(u32),
}

impl Coeff {
    pub fn mod_prime(p: u64) -> Result<Self, ZError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(ZError::NotPrime(p));
        }
        Ok(Coeff::ModP(p as u32))
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            Coeff::Integers => None,
            Coeff::ModP(p) => Some(p),
        }
    }

    pub fn is_field(self) -> bool {
        matches!(self, Coeff::ModP(_))
    }

    /// Canonical representative of `x` in this ring.
    pub fn reduce(self, x: BigInt) -> BigInt {
        match self {
            Coeff::Integers => x,
            Coeff::ModP(p) => x.mod_floor(&BigInt::from(p)),
        }
    }

    pub fn parse(s: &str) -> Result<Self, ZError> {
        let t = s.trim();
        if t == "Z" || t == "ZZ" {
            return Ok(Coeff::Integers);
        }
        let rest = t
            .strip_prefix("Z/")
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix("F"))
            .ok_or_else(|| ZError::BadCoefficientRing(s.to_string()))?;
        let p: u64 = rest
            .trim()
            .parse()
            .map_err(|_| ZError::BadCoefficientRing(s.to_string()))?;
        Coeff::mod_prime(p)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Integers => write!(f, "Z"),
            Coeff::ModP(p) => write!(f, "Z/{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense matrix over ℤ or ℤ/p with arbitrary-precision entries.
///
/// A matrix with `rows × cols` entries represents the homomorphism
/// `R^cols → R^rows` acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
    coeff: Coeff,
}

/// Homomorphisms between finite-rank free modules are stored as matrices.
pub type ModuleMap = IntegerMatrix;

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize, coeff: Coeff) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
            coeff,
        }
    }

    pub fn identity(n: usize, coeff: Coeff) -> Self {
        let mut m = Self::zeros(n, n, coeff);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major data, reducing entries into the ring.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], coeff: Coeff) -> Result<Self, ZError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_width(rows, c, coeff).inspect(|m| {
            debug_assert_eq!(m.rows, r);
        })
    }

    /// Like [`IntegerMatrix::from_rows`], but with an explicit column count so
    /// that `0 × c` matrices can be expressed.
    pub fn from_rows_with_width<T: Into<BigInt> + Clone>(
        rows: &[Vec<T>],
        cols: usize,
        coeff: Coeff,
    ) -> Result<Self, ZError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(ZError::RaggedRows { row: i, expected: cols, found: row.len() });
            }
            data.extend(row.iter().cloned().map(|x| coeff.reduce(x.into())));
        }
        Ok(IntegerMatrix { rows: rows.len(), cols, data, coeff })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>], coeff: Coeff) -> Self {
        let mut m = Self::zeros(rows, columns.len(), coeff);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = coeff.reduce(x.clone());
            }
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt], coeff: Coeff) -> Self {
        let mut m = Self::zeros(rows, cols, coeff);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.data[i * cols + i] = coeff.reduce(d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&BigInt, ZError> {
        if i >= self.rows || j >= self.cols {
            return Err(ZError::OutOfBounds { row: i, col: j, rows: self.rows, cols: self.cols });
        }
        Ok(&self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) -> Result<(), ZError> {
        if i >= self.rows || j >= self.cols {
            return Err(ZError::OutOfBounds { row: i, col: j, rows: self.rows, cols: self.cols });
        }
        self.data[i * self.cols + j] = self.coeff.reduce(value);
        Ok(())
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn put(&mut self, i: usize, j: usize, value: BigInt) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = self.coeff.reduce(value);
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let x = self.at(i, j);
                if i == j { x.is_one() } else { x.is_zero() }
            }))
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Reinterprets the matrix over another ring, reducing entries.
    pub fn with_coeff(&self, coeff: Coeff) -> Self {
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| coeff.reduce(x.clone())).collect(),
            coeff,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.coeff);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, ZError> {
        if self.cols != other.rows {
            return Err(ZError::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let coeff = self.coeff;
        let mut out = IntegerMatrix::zeros(self.rows, other.cols, coeff);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        if coeff.is_field() {
            for x in out.data.iter_mut() {
                *x = coeff.reduce(std::mem::take(x));
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, ZError> {
        if v.len() != self.cols {
            return Err(ZError::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                self.coeff.reduce(acc)
            })
            .collect())
    }

    pub fn sub(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, ZError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ZError::DimensionMismatch {
                context: "matrix difference",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let coeff = self.coeff;
        Ok(IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| coeff.reduce(a - b)).collect(),
            coeff,
        })
    }

    pub fn scale(&self, c: &BigInt) -> IntegerMatrix {
        let coeff = self.coeff;
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| coeff.reduce(a * c)).collect(),
            coeff,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, ZError> {
        if self.rows != other.rows {
            return Err(ZError::DimensionMismatch {
                context: "horizontal concatenation",
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut out = IntegerMatrix::zeros(self.rows, cols, self.coeff);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.at(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = self.coeff.reduce(other.at(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn write_block(&mut self, r0: usize, c0: usize, block: &IntegerMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = block.at(i, j);
                if !v.is_zero() {
                    self.put(r0 + i, c0 + j, v.clone());
                }
            }
        }
    }

    /// Adds `sign · block` into `self` at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &IntegerMatrix, sign: i32) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = block.at(i, j);
                if v.is_zero() {
                    continue;
                }
                let cur = std::mem::take(&mut self.data[(r0 + i) * self.cols + c0 + j]);
                let next = if sign >= 0 { cur + v } else { cur - v };
                self.data[(r0 + i) * self.cols + c0 + j] = self.coeff.reduce(next);
            }
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(self.rows, idx.len(), self.coeff);
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + k] = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(idx.len(), self.cols, self.coeff);
        for (k, &i) in idx.iter().enumerate() {
            out.data[k * self.cols..(k + 1) * self.cols].clone_from_slice(self.row(i));
        }
        out
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} over {}", self.rows, self.cols, self.coeff)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_bounds_is_an_error() {
        let m = IntegerMatrix::identity(2, Coeff::Integers);
        assert!(m.get(1, 1).is_ok());
        assert!(matches!(m.get(2, 0), Err(ZError::OutOfBounds { .. })));
        assert!(matches!(m.get(0, 2), Err(ZError::OutOfBounds { .. })));
    }

    #[test]
    fn entries_reduced_mod_p() {
        let f3 = Coeff::mod_prime(3).unwrap();
        let m = IntegerMatrix::from_rows(&[vec![-1i64, 7], vec![3, 5]], f3).unwrap();
        let flat: Vec<i64> = m.to_rows().concat().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(flat, vec![2, 1, 0, 2]);
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(matches!(Coeff::mod_prime(4), Err(ZError::NotPrime(4))));
        assert!(matches!(Coeff::parse("Z/6"), Err(ZError::NotPrime(6))));
        assert_eq!(Coeff::parse("Z/5").unwrap(), Coeff::ModP(5));
        assert_eq!(Coeff::parse("Z").unwrap(), Coeff::Integers);
    }

    #[test]
    fn ragged_rows_rejected() {
        let r = IntegerMatrix::from_rows(&[vec![1i64, 2], vec![3]], Coeff::Integers);
        assert!(matches!(r, Err(ZError::RaggedRows { row: 1, .. })));
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = IntegerMatrix::zeros(2, 3, Coeff::Integers);
        let b = IntegerMatrix::zeros(2, 2, Coeff::Integers);
        assert!(a.mul(&b).is_err());
    }
}
