//! Gaussian elimination over ℤ/p.
//!
//! Residues are held as `u64` values in `[0, p)` with `p < 2^32`, so every
//! product fits without overflow. This path shares no code with the Smith
//! form and serves as the independent oracle for field-coefficient ranks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::matrix::{Coeff, IntegerMatrix};

fn to_residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // a^(p-2) by square-and-multiply
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Dense matrix of residues mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u64>>,
}

impl FpMatrix {
    pub fn from_integer(a: &IntegerMatrix, p: u32) -> Self {
        let p = p as u64;
        FpMatrix {
            p,
            rows: a.rows(),
            cols: a.cols(),
            data: (0..a.rows()).map(|i| a.row(i).iter().map(|x| to_residue(x, p)).collect()).collect(),
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        rref_with(&mut self.data, self.cols, self.p, None)
    }

    pub fn rank(&self) -> usize {
        let mut c = self.clone();
        c.rref().len()
    }
}

/// Row-reduces `rows` (only the first `cols` columns are used for pivots).
/// When `companion` is given, the same row operations are applied to it.
fn rref_with(rows: &mut [Vec<u64>], cols: usize, p: u64, mut companion: Option<&mut Vec<Vec<u64>>>) -> Vec<usize> {
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(pr) = (r..m).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        if let Some(comp) = companion.as_deref_mut() {
            comp.swap(r, pr);
        }
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        if let Some(comp) = companion.as_deref_mut() {
            for x in comp[r].iter_mut() {
                *x = *x * inv % p;
            }
        }
        let pivot_row = rows[r].clone();
        let pivot_comp = companion.as_deref().map(|comp| comp[r].clone());
        for i in 0..m {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let f = rows[i][c];
            for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = (*x + p - f * y % p) % p;
                }
            }
            if let (Some(comp), Some(pc)) = (companion.as_deref_mut(), pivot_comp.as_ref()) {
                for (x, &y) in comp[i].iter_mut().zip(pc) {
                    if y != 0 {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a matrix over ℤ/p by plain Gaussian elimination.
pub fn rank_mod_p(a: &IntegerMatrix, p: u32) -> usize {
    FpMatrix::from_integer(a, p).rank()
}

/// Factored form `t · a = r` (`r` in reduced row echelon form) for repeated solves.
pub struct FieldSolver {
    p: u64,
    rows: usize,
    cols: usize,
    reduced: Vec<Vec<u64>>,
    transform: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FieldSolver {
    pub fn new(a: &IntegerMatrix) -> Self {
        let p = a.coeff().modulus().expect("field solver needs Z/p") as u64;
        let mut fm = FpMatrix::from_integer(a, p as u32);
        let mut t: Vec<Vec<u64>> = (0..fm.rows)
            .map(|i| {
                let mut r = vec![0u64; fm.rows];
                r[i] = 1;
                r
            })
            .collect();
        let pivots = rref_with(&mut fm.data, fm.cols, p, Some(&mut t));
        FieldSolver { p, rows: fm.rows, cols: fm.cols, reduced: fm.data, transform: t, pivots }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let p = self.p;
        let bb: Vec<u64> = b.iter().map(|x| to_residue(x, p)).collect();
        let c: Vec<u64> = self
            .transform
            .iter()
            .map(|row| row.iter().zip(&bb).fold(0u64, |acc, (&t, &x)| (acc + t * x % p) % p))
            .collect();
        if c[self.rank()..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![BigInt::zero(); self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = BigInt::from(c[i]);
        }
        Some(x)
    }

    pub fn kernel_basis(&self) -> IntegerMatrix {
        let p = self.p;
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &self.pivots {
                v[c] = true;
            }
            v
        };
        let columns: Vec<Vec<BigInt>> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![BigInt::zero(); self.cols];
                v[f] = BigInt::from(1u32);
                for (i, &pc) in self.pivots.iter().enumerate() {
                    let r = self.reduced[i][f];
                    if r != 0 {
                        v[pc] = BigInt::from((p - r) % p);
                    }
                }
                v
            })
            .collect();
        IntegerMatrix::from_columns(self.cols, &columns, Coeff::ModP(p as u32))
    }
}
