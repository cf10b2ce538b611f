//! Product-set growth: tripling, iterated products, covering, tree and coset
//! regularization, and the sum-product trace lab over `F_{p^k}`.

mod product;
mod strip;
mod sumproduct;
mod tree;

pub use product::{
    gowers_cover_check, iterated_product, product_set, tripling_report, CoverReport, GrowthReport,
    IteratedCheck, REGIME_EPSILON,
};
pub use strip::{coset_strip, StripReport, StripStep, DEFAULT_MIN_FACTOR_ORDER};
pub use sumproduct::{
    find_nondegenerate, trace_amplify, w, w_identity_holds, AmplifyReport, NondegenerateWitness,
    DEFAULT_R_MAX,
};
pub use tree::{tree_degrees, tree_regularize, TreeRegularization};

use thiserror::Error;

use crate::groups::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error("product set has {size} elements, cap is {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("set is not closed under inverses")]
    NotSymmetric,
    #[error("empty set")]
    EmptyResult,
    #[error("no subgroup atlas for factor {0}")]
    AtlasUnavailable(usize),
    #[error("zero element where a unit is required")]
    ZeroElement,
    #[error("set does not generate the group")]
    NotGenerating,
    #[error("no witness up to word length {r_max}")]
    SearchExhausted { r_max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("invalid set: {0}")]
    InvalidSet(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[cfg(test)]
mod tests;
