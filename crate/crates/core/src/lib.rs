//! Exact derived limits of inverse systems over finite posets.
//!
//! The crate is organized bottom-up:
//!
//! - [`zmodule`]: matrices over ℤ and ℤ/p, Smith normal form, integer solves,
//!   finitely generated abelian groups in invariant-factor form.
//! - [`complex`]: cochain complexes of free modules and their cohomology.
//! - [`prosys`]: posets, inverse systems, the Roos complex, `lim^n`,
//!   flasqueness, cofinal restriction and long exact sequences.
//! - [`coherence`]: set ideals, the systems `X[I,J,H]`, `Y[κ,X,Ĩ,K]` and
//!   `A/B/(B/A)_{κ,λ}`, n-coherent families and their trivializations.
//! - [`walks`]: ordinals below ω^ω, ladder systems, ρ₁ walks and the
//!   coherent families built from them.

pub mod coherence;
pub mod complex;
pub mod prosys;
pub mod random;
pub mod walks;
pub mod zmodule;

pub use zmodule::{Coeff, FinAbGroup, IntegerMatrix};
