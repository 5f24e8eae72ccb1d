//! Ordinals below ω^ω, ladder systems, the ρ₁ walk and the families built
//! from its fiber maps.

mod ladder;
mod ordinal;
mod recursion;
mod tau;
mod walk;

use thiserror::Error;

use crate::coherence::CoherenceError;

pub use ladder::{CanonicalLadders, LadderSystem};
pub use ordinal::OrdinalCNF;
pub use recursion::{ordinal_grid, recursive_base_family, support_invariant_holds, BaseFamily, Entries, Stage, StageKind};
pub use tau::{build_tau_phi, tau, OrdinalFunction, TauPhi};
pub use walk::{defect_statistics, DefectStatistics, WalkFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("invalid ordinal: {0}")]
    BadOrdinal(String),
    #[error("ordinal {ordinal} is not below the bound {bound}")]
    BoundExceeded { ordinal: String, bound: String },
    #[error("expected {low} <= {high}")]
    NotOrdered { low: String, high: String },
    #[error("{size} support coordinates exceed the supported {max}")]
    GridTooLarge { size: usize, max: usize },
    #[error("no trivialization found at limit stage {0}")]
    TrivializationNotFound(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
}

impl WalkError {
    pub fn is_cap(&self) -> bool {
        match self {
            WalkError::BoundExceeded { .. } | WalkError::GridTooLarge { .. } => true,
            WalkError::Coherence(e) => e.is_cap(),
            _ => false,
        }
    }

    pub fn is_verification(&self) -> bool {
        match self {
            WalkError::Verification(_) | WalkError::TrivializationNotFound(_) => true,
            WalkError::Coherence(e) => e.is_verification(),
            _ => false,
        }
    }
}
