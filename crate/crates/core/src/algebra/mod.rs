//! Number-field integers modulo square-free rational integers, their CRT
//! splitting into finite fields, and finite-field arithmetic.

mod finite_field;
pub mod fpoly;
mod integral;
pub mod integers;
mod product;
mod residue;
pub mod zpoly;

pub use finite_field::{FiniteField, FqElem, MAX_K};
pub use integral::IntegralElem;
pub use product::FieldProduct;
pub use residue::{CrtFactor, NumberField, ResidueRing, RingDescriptor, RingElem, RingOp};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomial is not monic of degree >= 1")]
    NotMonic,
    #[error("polynomial factors over Z: {0}")]
    Reducible(String),
    #[error("discriminant is zero")]
    ZeroDiscriminant,
    #[error("degree {0} exceeds the supported maximum of 4")]
    UnsupportedDegree(usize),
    #[error("modulus {0} is not square-free (or is < 2)")]
    NotSquareFree(u64),
    #[error("prime {0} divides the discriminant")]
    RamifiedPrime(u64),
    #[error("trial-division factorization of {0} failed")]
    CompositePrimeDetected(u64),
    #[error("factors of f mod {0} do not multiply back to f")]
    FactorizationInconsistent(u64),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("CRT parts do not match the ring's factors")]
    FactorMismatch,
    #[error("binary operation needs a second operand")]
    MissingOperand,
    #[error("modulus polynomial is not irreducible")]
    NotIrreducible,
    #[error("integer overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}
