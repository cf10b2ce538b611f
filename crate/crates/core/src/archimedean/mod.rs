//! The archimedean side: complex embeddings of `K`, the adjoint action on
//! `sl_d(C)`, proximality, generic sets, ping-pong freeness certificates,
//! norm growth and the `H_V`/`H_T` membership predicates.
//!
//! Everything here is numeric in `f64` complex arithmetic with explicit
//! tolerances, except group words, which are evaluated exactly over `Z[θ]`.

mod embed;
mod exact;
mod generic;
mod linalg;
mod normgrowth;
mod pingpong;
mod predicates;

pub use embed::{embed, CMat, EmbeddingSet, DEFAULT_PRECISION};
pub use exact::{ExactGroup, IntMat};
pub use generic::{
    attractors, generic_check, symmetrize, Attractor, ConditionResult, GenericReport, PREDICATE_TOL,
    SUBSET_CAP,
};
pub use linalg::{
    adjoint, adjoint_with_inverse, condition_number, distance_to_subspace, eigenvalues,
    orthonormal_span, projective_distance, proximality, sl_basis, sl_coords, CVec,
    ProximalityReport, CONDITION_CAP, PROXIMALITY_GAP,
};
pub use normgrowth::{norm_growth, NormGrowth, NormRow};
pub use pingpong::{exact_freeness, power_up, FreeCertificate, GeometricCertificate, PowerUpOptions};
pub use predicates::{
    escape_reference, escape_upper_bound, first_letter_search, h_t_word_counts, predicate_h_t,
    predicate_h_v, LetterSearch, PredicateValue, WordCountRow,
};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::walks::WalkError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArchimedeanError {
    #[error("precision loss: {0}")]
    PrecisionLoss(&'static str),
    #[error("matrix is too ill-conditioned")]
    IllConditioned,
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("letter {letter} is not proximal under embedding {embedding}")]
    NonProximalMember { letter: usize, embedding: usize },
    #[error("no power M ≤ {m_max} passes the ping-pong conditions")]
    NoSuchM { m_max: u32 },
    #[error("reduced words {first:?} and {second:?} have the same value")]
    FreenessUnverified { first: String, second: String },
    #[error("{size} elements exceed the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("matrix has the wrong shape")]
    Shape,
    #[error("determinant is not 1")]
    NotSpecial,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

#[cfg(test)]
mod tests;
