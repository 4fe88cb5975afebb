//! Checking explicit dℓPCF type derivations.
//!
//! A [`Derivation`] carries one node per term constructor together with the
//! index annotations the rules cannot reconstruct. [`check`] verifies the
//! structure and discharges every semantic side condition through the
//! bounded oracle; [`erase_derivation`] forgets the indices and yields the
//! underlying PCF derivation.

pub mod check;
pub mod derivation;
pub mod erase;
pub mod sexp;

pub use check::{check, CheckReport, Obligation, ObligationKind};
pub use derivation::{
    Annotations, BoundedSumWitness, Derivation, DerivationError, Path, RecAnnotations, Rule, StructuralError,
    TypingContext, UnarySumWitness,
};
pub use erase::{erase_derivation, root_bounds, PcfDerivation};
pub use sexp::{parse_sexp, Sexp};
