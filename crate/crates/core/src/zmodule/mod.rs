//! Exact linear algebra over ℤ and ℤ/p.

mod field;
mod group;
mod matrix;
mod smith;

use thiserror::Error;

pub use field::{rank_mod_p, FieldSolver, FpMatrix};
pub use group::FinAbGroup;
pub use matrix::{Coeff, IntegerMatrix, ModuleMap};
pub use smith::{
    group_from_map, invariant_factors, rank, smith_normal_form, solve_integer_system, IntegerSolver, SmithForm,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZError {
    #[error("entry ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("modulus {0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("unrecognized coefficient ring {0:?} (expected Z or Z/p)")]
    BadCoefficientRing(String),
    #[error("operation requires coefficients in {expected}, got {found}")]
    WrongRing { expected: Coeff, found: Coeff },
    #[error("internal verification failed: {0}")]
    Internal(String),
}
