//! Finite posets, inverse systems of free modules, the normalized Roos
//! complex, derived limits, flasqueness and long exact sequences.

mod flasque;
mod les;
mod poset;
mod roos;
mod system;

use thiserror::Error;

use crate::complex::ComplexError;
use crate::zmodule::{Coeff, ZError};

pub use flasque::{is_flasque, is_flasque_on, limit_restriction_cokernel, FlasqueReport};
pub use les::{les_of_ses, ExactnessNode, LesReport, SesOfSystems};
pub use poset::Poset;
pub use roos::{derived_limit, derived_limits, roos_complex, roos_complex_to_degree, RoosComplex};
pub use system::{build_system, restrict_cofinal, InverseSystem};

/// Resource caps. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_chains: u64,
    pub max_subsets: u64,
    pub max_poset: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_chains: 1_000_000, max_subsets: 1_000_000, max_poset: 1_000_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("duplicate poset element {0:?}")]
    DuplicateElement(String),
    #[error("unknown poset element {0:?}")]
    UnknownElement(String),
    #[error("poset index {0} out of range")]
    UnknownIndex(usize),
    #[error("relation is not antisymmetric: {0:?} and {1:?} lie below each other")]
    NotAntisymmetric(String, String),
    #[error("map given for {x:?} -> {y:?}, but {x:?} is not below {y:?}")]
    NotComparable { x: String, y: String },
    #[error("no transition map for {x:?} <= {y:?} and none can be composed")]
    MissingMap { x: String, y: String },
    #[error("map on the reflexive pair {0:?} <= {0:?} is not the identity")]
    NotIdentity(String),
    #[error("map p[{x:?},{y:?}] should be {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    DimensionMismatch { x: String, y: String, expected_rows: usize, expected_cols: usize, rows: usize, cols: usize },
    #[error("expected {expected} term ranks, got {found}")]
    RankCount { expected: usize, found: usize },
    #[error("not functorial at {x:?} <= {y:?} <= {z:?}: p[x,z] != p[x,y] p[y,z]")]
    NotFunctorial { x: String, y: String, z: String },
    #[error("coefficient ring mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: Coeff, found: Coeff },
    #[error("chain count {needed} exceeds cap {cap}")]
    ChainCapExceeded { cap: u64, needed: u128 },
    #[error("subset enumeration of size {needed} exceeds cap {cap}")]
    SubsetCapExceeded { cap: u64, needed: u128 },
    #[error("poset size {needed} exceeds cap {cap}")]
    PosetCapExceeded { cap: u64, needed: u128 },
    #[error("short sequence not exact at {element:?}: {reason}")]
    NotExactInput { element: String, reason: String },
    #[error("systems in a short exact sequence must share one poset and ring")]
    DifferentPosets,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Linear(#[from] ZError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl SystemError {
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            SystemError::ChainCapExceeded { .. }
                | SystemError::SubsetCapExceeded { .. }
                | SystemError::PosetCapExceeded { .. }
        )
    }

    pub fn is_verification(&self) -> bool {
        matches!(self, SystemError::Verification(_) | SystemError::Linear(ZError::Internal(_)))
    }
}

pub(crate) mod lattice {
    //! Submodules of `R^m` given by generating columns.

    use num_bigint::BigInt;

    use crate::zmodule::{Coeff, IntegerMatrix, IntegerSolver, ZError};

    /// Basis of `ker a` as columns.
    pub fn kernel(a: &IntegerMatrix) -> Result<IntegerMatrix, ZError> {
        if a.rows() == 0 || a.is_zero() {
            return Ok(IntegerMatrix::identity(a.cols(), a.coeff()));
        }
        Ok(IntegerSolver::new(a)?.kernel_basis())
    }

    /// Coordinates of every column of `vectors` in terms of the columns of
    /// `gens`, or `None` if some column is outside their span.
    pub fn coordinates(gens: &IntegerMatrix, vectors: &IntegerMatrix) -> Result<Option<IntegerMatrix>, ZError> {
        let coeff = gens.coeff();
        if vectors.cols() == 0 {
            return Ok(Some(IntegerMatrix::zeros(gens.cols(), 0, coeff)));
        }
        if gens.cols() == 0 {
            return Ok(vectors.is_zero().then(|| IntegerMatrix::zeros(0, vectors.cols(), coeff)));
        }
        let solver = IntegerSolver::new(gens)?;
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(vectors.cols());
        for j in 0..vectors.cols() {
            match solver.solve(&vectors.column(j))? {
                Some(x) => cols.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some(IntegerMatrix::from_columns(gens.cols(), &cols, coeff)))
    }

    pub fn contains(gens: &IntegerMatrix, vectors: &IntegerMatrix) -> Result<bool, ZError> {
        Ok(coordinates(gens, vectors)?.is_some())
    }

    pub fn same_span(a: &IntegerMatrix, b: &IntegerMatrix) -> Result<bool, ZError> {
        Ok(contains(a, b)? && contains(b, a)?)
    }

    pub fn empty(rows: usize, coeff: Coeff) -> IntegerMatrix {
        IntegerMatrix::zeros(rows, 0, coeff)
    }
}
