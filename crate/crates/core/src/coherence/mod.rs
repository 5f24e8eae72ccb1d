//! Set ideals, the systems built from them, and n-coherent families of
//! functions modulo an ideal.
//!
//! On a finite ground set an ideal is determined by `J_max`, the union of its
//! generators, and "support in `J`" means "support inside `J_max`". Every
//! coherence and triviality question then becomes exact linear algebra on the
//! coordinates outside `J_max`.

mod dictionary;
mod extend;
mod family;
mod ideal;
mod systems;
mod trivialize;

use thiserror::Error;

use crate::prosys::SystemError;
use crate::zmodule::ZError;

pub use dictionary::Dictionary;
pub use extend::extend_family;
pub use family::{is_n_coherent, CoherenceCheck, CoherenceWitness, CoherentFamily, Target};
pub use ideal::{build_ideal, set_name, IndexedFunction, SetIdeal, MAX_GROUND};
pub use systems::{
    build_akl_systems, build_quotient_system, build_x_ses, build_x_system, build_y_system, subset_poset, union_closure,
};
pub use trivialize::{find_trivialization, verify_trivialization, Trivialization, TrivializationProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoherenceError {
    #[error("ground set of size {0} exceeds the supported maximum of {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("generator {generator} contains {element}, which lies outside the ground set")]
    GeneratorOutOfGround { generator: usize, element: usize },
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("family is not coherent: alternating sum on tuple {tuple:?} is nonzero at {element}")]
    NotCoherent { tuple: Vec<usize>, element: usize },
    #[error("cochain is not a cocycle in degree {degree}")]
    NotACocycle { degree: usize },
    #[error("cocycle class has no coherent representative over this generator list")]
    NoCoherentLift,
    #[error("extension target ({mu}, {nu}) is not at least ({kappa}, {lambda})")]
    ParameterNotLarger { kappa: usize, lambda: usize, mu: usize, nu: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Linear(#[from] ZError),
}

impl CoherenceError {
    pub fn is_cap(&self) -> bool {
        matches!(self, CoherenceError::System(e) if e.is_cap())
    }

    pub fn is_verification(&self) -> bool {
        match self {
            CoherenceError::Verification(_) | CoherenceError::Linear(ZError::Internal(_)) => true,
            CoherenceError::System(e) => e.is_verification(),
            _ => false,
        }
    }
}
