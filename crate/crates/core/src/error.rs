use thiserror::Error;

use crate::chain::{Elem, VerifyReport};

/// Errors raised by the library.
///
/// Structural problems (bad dimensions, out-of-range entries) are kept apart
/// from axiom violations, which carry the full verifier report.
#[derive(Debug, Error)]
pub enum TomoError {
    #[error("malformed input: {0}")]
    Structure(String),

    #[error("table violates the tomonoid axioms\n{0}")]
    Axioms(VerifyReport),

    #[error("partition violates the tomonoid partition axioms\n{0}")]
    PartitionAxioms(VerifyReport),

    #[error("element {q} is out of range for a chain of size {size}")]
    OutOfRange { q: Elem, size: usize },

    #[error("the Rees quotient by the identity element {q} would collapse the identity")]
    QuotientByIdentity { q: Elem },

    #[error("operation is undefined for the trivial tomonoid")]
    Trivial,

    #[error("element {0} is not an idempotent")]
    NotIdempotent(Elem),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(
        "ramification for the idempotent pair ({left},{right}) is obstructed: \
         (1,0) and (1,atom) fall into one class, so there is no one-element coextension"
    )]
    Obstructed { left: Elem, right: Elem },

    #[error("internal soundness failure: {0}")]
    Soundness(String),

    #[error("size {size} exceeds the oracle cap {cap}; raise the cap (TOMO_ORACLE_CAP) to enumerate it")]
    OracleCap { size: usize, cap: usize },
}

pub type Result<T, E = TomoError> = std::result::Result<T, E>;
