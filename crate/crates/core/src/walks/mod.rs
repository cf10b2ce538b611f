//! Measures on groups: exact convolution powers, flattening, escape of mass
//! from subgroups, entropy, free-group walk statistics and level-set extraction.

mod bsg;
mod coset;
mod entropy;
mod flatten;
pub mod free;
mod measure;

pub use bsg::{bsg_extract, BsgReport};
pub use coset::{coset_mass, coset_mass_max, escape_profile, EscapeProfile, EscapeRow};
pub use entropy::{conditional_entropy, entropy, join_entropy, partition_entropy};
pub use flatten::{flattening_trace, FlatRow, FlatteningTrace};
pub use free::{free_walk_stats, FreeWalkStats};
pub use measure::{ExactMeasure, FloatMeasure, WalkMeasure, Weight, DEFAULT_BUDGET};

use thiserror::Error;

use crate::groups::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("work {work} exceeds the budget {budget}")]
    BudgetExceeded { work: u128, budget: u128 },
    #[error("measures live on different groups")]
    GroupMismatch,
    #[error("generator set is empty")]
    EmptySet,
    #[error("subgroup is the whole group")]
    NotProper,
    #[error("labelling does not cover the support")]
    NotAPartition,
    #[error("free rank must be between 2 and 63, got {0}")]
    InvalidRank(usize),
    #[error("hypothesis not met")]
    HypothesisNotMet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[cfg(test)]
mod tests;
