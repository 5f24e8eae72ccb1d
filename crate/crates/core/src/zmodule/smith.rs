use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::FieldSolver;
use super::group::FinAbGroup;
use super::matrix::{Coeff, IntegerMatrix};
use super::ZError;

/// Smith normal form `u · a · v = diag(d)` of an integer matrix.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries, `min(rows, cols)` of them, zero-padded after the rank.
    pub diag: Vec<BigInt>,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diag[..self.rank()]
    }

    pub fn diagonal_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::diagonal(self.rows, self.cols, &self.diag, Coeff::Integers)
    }
}

struct Elimination {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    m: usize,
    n: usize,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::one();
            r
        })
        .collect()
}

fn sub_scaled(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

impl Elimination {
    fn new(a: &IntegerMatrix, want_u: bool, want_v: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        Elimination {
            a: a.to_rows(),
            u: want_u.then(|| identity_rows(m)),
            v: want_v.then(|| identity_rows(n)),
            m,
            n,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q · row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        let (lo, hi) = (i.min(t), i.max(t));
        let (head, tail) = self.a.split_at_mut(hi);
        let (target, src) = if i < t { (&mut head[lo], &tail[0]) } else { (&mut tail[0], &head[lo]) };
        sub_scaled(target, src, q);
        if let Some(u) = &mut self.u {
            let (head, tail) = u.split_at_mut(hi);
            let (target, src) = if i < t { (&mut head[lo], &tail[0]) } else { (&mut tail[0], &head[lo]) };
            sub_scaled(target, src, q);
        }
    }

    /// col_j -= q · col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        for row in &mut self.a {
            if !row[t].is_zero() {
                let delta = q * &row[t];
                row[j] -= delta;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v {
                if !row[t].is_zero() {
                    let delta = q * &row[t];
                    row[j] -= delta;
                }
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in &mut self.a[t] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[t] {
                *x = -std::mem::take(x);
            }
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if ax.is_one() {
                    return Some((i, j));
                }
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) -> Vec<BigInt> {
        let k = self.m.min(self.n);
        let mut diag = vec![BigInt::zero(); k];
        for t in 0..k {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // clear column t below the pivot
                let mut dirty = false;
                for i in t + 1..self.m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][t] / &self.a[t][t];
                    if !q.is_zero() {
                        self.row_sub(i, t, &q);
                    }
                    dirty |= !self.a[i][t].is_zero();
                }
                if dirty {
                    let i = (t + 1..self.m)
                        .filter(|&i| !self.a[i][t].is_zero())
                        .min_by_key(|&i| self.a[i][t].abs())
                        .expect("nonzero remainder");
                    self.swap_rows(t, i);
                    continue;
                }
                // clear row t right of the pivot
                for j in t + 1..self.n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.a[t][j] / &self.a[t][t];
                    if !q.is_zero() {
                        self.col_sub(j, t, &q);
                    }
                    dirty |= !self.a[t][j].is_zero();
                }
                if dirty {
                    let j = (t + 1..self.n)
                        .filter(|&j| !self.a[t][j].is_zero())
                        .min_by_key(|&j| self.a[t][j].abs())
                        .expect("nonzero remainder");
                    self.swap_cols(t, j);
                    continue;
                }
                // the pivot must divide the remaining block
                if !self.a[t][t].abs().is_one() {
                    let p = self.a[t][t].clone();
                    let offender = (t + 1..self.m).find(|&i| {
                        self.a[i][t + 1..].iter().any(|x| !(x % &p).is_zero())
                    });
                    if let Some(i) = offender {
                        self.row_sub(t, i, &BigInt::from(-1));
                        continue;
                    }
                }
                break;
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            diag[t] = self.a[t][t].clone();
        }
        diag
    }
}

fn require_integers(a: &IntegerMatrix) -> Result<(), ZError> {
    if a.coeff() != Coeff::Integers {
        return Err(ZError::WrongRing { expected: Coeff::Integers, found: a.coeff() });
    }
    Ok(())
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>, n: usize) -> IntegerMatrix {
    IntegerMatrix::from_rows_with_width(&rows, n, Coeff::Integers).expect("square transform")
}

/// Smith normal form over ℤ with both transforms, checked by reconstruction.
pub fn smith_normal_form(a: &IntegerMatrix) -> Result<SmithForm, ZError> {
    let sf = smith_unchecked(a, true, true)?;
    let d = sf.u.mul(a)?.mul(&sf.v)?;
    if d != sf.diagonal_matrix() {
        return Err(ZError::Internal("Smith form reconstruction u·a·v = d failed".into()));
    }
    for w in sf.invariant_factors().windows(2) {
        if !(&w[1] % &w[0]).is_zero() {
            return Err(ZError::Internal("Smith form divisibility chain broken".into()));
        }
    }
    Ok(sf)
}

pub(crate) fn smith_unchecked(a: &IntegerMatrix, want_u: bool, want_v: bool) -> Result<SmithForm, ZError> {
    require_integers(a)?;
    let mut e = Elimination::new(a, want_u, want_v);
    let diag = e.run();
    let (m, n) = (e.m, e.n);
    Ok(SmithForm {
        diag,
        u: e.u.map_or_else(|| IntegerMatrix::zeros(0, 0, Coeff::Integers), |u| rows_to_matrix(u, m)),
        v: e.v.map_or_else(|| IntegerMatrix::zeros(0, 0, Coeff::Integers), |v| rows_to_matrix(v, n)),
        rows: m,
        cols: n,
    })
}

/// Invariant factors of an integer matrix without tracking transforms.
pub fn invariant_factors(a: &IntegerMatrix) -> Result<Vec<BigInt>, ZError> {
    require_integers(a)?;
    let mut e = Elimination::new(a, false, false);
    let mut d = e.run();
    d.retain(|x| !x.is_zero());
    Ok(d)
}

/// Rank of `a` over its coefficient ring. Over ℤ/p this counts the
/// invariant factors of the integer lift that are prime to `p`.
pub fn rank(a: &IntegerMatrix) -> Result<usize, ZError> {
    match a.coeff() {
        Coeff::Integers => Ok(invariant_factors(a)?.len()),
        Coeff::ModP(p) => {
            let lift = a.with_coeff(Coeff::Integers);
            let p = BigInt::from(p);
            Ok(invariant_factors(&lift)?.iter().filter(|d| !(*d % &p).is_zero()).count())
        }
    }
}

/// Reusable solver for `a · x = b` with many right-hand sides.
pub enum IntegerSolver {
    Integers { smith: SmithForm },
    Field(FieldSolver),
}

impl IntegerSolver {
    pub fn new(a: &IntegerMatrix) -> Result<Self, ZError> {
        match a.coeff() {
            Coeff::Integers => Ok(IntegerSolver::Integers { smith: smith_unchecked(a, true, true)? }),
            Coeff::ModP(_) => Ok(IntegerSolver::Field(FieldSolver::new(a))),
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            IntegerSolver::Integers { smith } => smith.rows,
            IntegerSolver::Field(f) => f.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            IntegerSolver::Integers { smith } => smith.cols,
            IntegerSolver::Field(f) => f.cols(),
        }
    }

    /// Some `x` with `a · x = b`, or `None` when no solution exists in the ring.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, ZError> {
        if b.len() != self.rows() {
            return Err(ZError::DimensionMismatch { context: "right-hand side", expected: self.rows(), found: b.len() });
        }
        match self {
            IntegerSolver::Field(f) => Ok(f.solve(b)),
            IntegerSolver::Integers { smith } => {
                let c = smith.u.apply(b)?;
                let r = smith.rank();
                if c[r..].iter().any(|x| !x.is_zero()) {
                    return Ok(None);
                }
                let mut y = vec![BigInt::zero(); smith.cols];
                for i in 0..r {
                    let d = &smith.diag[i];
                    if !(&c[i] % d).is_zero() {
                        return Ok(None);
                    }
                    y[i] = &c[i] / d;
                }
                Ok(Some(smith.v.apply(&y)?))
            }
        }
    }

    /// Basis of the kernel, as columns.
    pub fn kernel_basis(&self) -> IntegerMatrix {
        match self {
            IntegerSolver::Field(f) => f.kernel_basis(),
            IntegerSolver::Integers { smith } => {
                let idx: Vec<usize> = (smith.rank()..smith.cols).collect();
                smith.v.select_columns(&idx)
            }
        }
    }
}

/// Returns some `x` with `a · x = b`, or `None` if the system has no solution
/// over the matrix's coefficient ring. Every returned `x` is checked by substitution.
pub fn solve_integer_system(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, ZError> {
    if b.len() != a.rows() {
        return Err(ZError::DimensionMismatch { context: "right-hand side", expected: a.rows(), found: b.len() });
    }
    let solver = IntegerSolver::new(a)?;
    let x = solver.solve(b)?;
    if let Some(x) = &x {
        let coeff = a.coeff();
        let lhs = a.apply(x)?;
        if lhs.iter().zip(b).any(|(l, r)| coeff.reduce(l - r) != BigInt::zero()) {
            return Err(ZError::Internal("solution failed substitution check".into()));
        }
    }
    Ok(x)
}

/// Kernel basis (as columns) and cokernel of `a`.
pub fn group_from_map(a: &IntegerMatrix) -> Result<(IntegerMatrix, FinAbGroup), ZError> {
    match a.coeff() {
        Coeff::Integers => {
            let sf = smith_unchecked(a, false, true)?;
            let r = sf.rank();
            let idx: Vec<usize> = (r..sf.cols).collect();
            let kernel = sf.v.select_columns(&idx);
            let coker = FinAbGroup::from_invariant_factors(
                Coeff::Integers,
                a.rows() - r,
                sf.invariant_factors().to_vec(),
            )?;
            Ok((kernel, coker))
        }
        coeff @ Coeff::ModP(_) => {
            let f = FieldSolver::new(a);
            let coker = FinAbGroup::vector_space(coeff, a.rows() - f.rank());
            Ok((f.kernel_basis(), coker))
        }
    }
}
