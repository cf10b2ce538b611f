//! `SL_d` over residue rings: element arithmetic in CRT form, enumeration of
//! small groups, projections onto factors, the `SL_2(F_p)` subgroup atlas and
//! diagnostics for subgroups of products.

mod element;
mod io;
mod metrics;
mod subgroup;

pub use element::{sl_order, GroupElem, GroupSpec, GroupSummary, DEFAULT_ENUMERATION_CAP};
pub use io::GeneratorFile;
pub use metrics::{centralizer_index, factor_multiplicity_ok, factorwise_distance};
pub use subgroup::{
    closure, conjugates, projection_profile, subgroup_atlas, torus_class, FactorProjection, SubgroupDescriptor,
    SubgroupExport, SubgroupKind,
};

pub(crate) use subgroup::bfs_closure;

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("elements live over different rings or dimensions")]
    RingMismatch,
    #[error("matrix does not have determinant 1")]
    NotInSL,
    #[error("group or set of size {size} exceeds the cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("projection target is not a nonempty set of distinct factors")]
    FactorMismatch,
    #[error("dimension must be at least 1")]
    DimensionZero,
    #[error("group order overflows u128")]
    Overflow,
    #[error("subgroup atlas needs SL_2 over an odd prime field")]
    AtlasUnavailable,
    #[error("element set is not closed under products and inverses")]
    NotSubgroup,
    #[error("subgroup has no explicit element list")]
    NotExplicit,
    #[error("generator file: {0}")]
    Parse(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[cfg(test)]
mod tests;
