//! The Cayley graph as the convolution operator `M f = χ_S ∗ f`.
//!
//! All quantities use the normalized operator `M = |S|⁻¹·adjacency`, so the
//! unnormalized gap `|S| - λ_2(adjacency)` reads `|S|(1 - λ2)` here.

mod cheeger;
mod eigen;
mod induced;
mod operator;

pub use cheeger::{cheeger_exhaustive, CheegerValue, CHEEGER_MAX_VERTICES};
pub use eigen::{dense_spectrum, spectrum_top2, IterativeOptions, Method, SpectrumReport};
pub use induced::sl2_nontrivial_spectrum;
pub use operator::{CayleyOperator, OperatorMode, DENSE_CAP};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{GroupElem, GroupError, GroupSpec};
use crate::walks::{ExactMeasure, WalkError, DEFAULT_BUDGET};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("generator multiset is not closed under inversion")]
    NotSymmetric,
    #[error("{0} vertices exceed the dense limit")]
    TooLargeForDense(u128),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("unsupported group: expected {0}")]
    Unsupported(&'static str),
    #[error("{0} vertices exceed the exhaustive limit")]
    TooLarge(u128),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// `Tr(M^{2k}) = |G|·‖χ_S^{(k)}‖₂²`, exactly.
pub fn trace_moment(
    spec: &GroupSpec,
    s: &[GroupElem],
    k: usize,
) -> Result<BigRational, SpectralError> {
    let mu = ExactMeasure::walk_power(spec, s, k, DEFAULT_BUDGET)?;
    let (num, den) = mu.l2_squared_parts();
    Ok(BigRational::new(
        BigInt::from(num) * BigInt::from(spec.order()),
        BigInt::from(den),
    ))
}

/// Lower bound for the dimension of a nontrivial complex representation of
/// `SL_d(F_{p^k})`.
pub fn min_rep_dimension(p: u64, k: u32, d: usize) -> u64 {
    let q = p.saturating_pow(k);
    let bound = match d {
        0 | 1 => 1,
        2 if p == 2 => q.saturating_sub(1),
        2 => q.saturating_sub(1) / 2,
        _ => q.saturating_pow(d as u32 - 1).saturating_sub(1),
    };
    bound.max(1)
}

/// Smallest [`min_rep_dimension`] over the CRT factors.
pub fn group_min_rep_dimension(spec: &GroupSpec) -> u64 {
    spec.ring()
        .fields()
        .iter()
        .map(|f| min_rep_dimension(f.characteristic(), f.degree() as u32, spec.dim()))
        .min()
        .unwrap_or(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenBoundReport {
    pub k: usize,
    pub lambda2: f64,
    pub delta_prime: f64,
    pub min_dimension: u64,
    /// `λ2^{2k}`.
    pub lhs: f64,
    /// `|G|^{1-δ'}‖χ_S^{(k)}‖₂²`.
    pub rhs: f64,
    pub trace: String,
    pub holds: bool,
}

/// Compares `λ2^{2k}` with `|G|^{1-δ'}‖χ_S^{(k)}‖₂²`; `δ'` defaults to
/// `log(min dimension) / log|G|`, which makes the right side `Tr(M^{2k}) / min dimension`.
pub fn eigenvalue_bound_check<T: Real>(
    spec: &GroupSpec,
    s: &[GroupElem],
    k: usize,
    delta_prime: Option<f64>,
) -> Result<EigenBoundReport, SpectralError> {
    let op = CayleyOperator::<T>::build(spec, s, OperatorMode::Dense, DENSE_CAP as u128)?;
    let lambda2 = spectrum_top2(&op, Method::Dense, &IterativeOptions::default())?
        .lambda2
        .as_f64();
    let min_dimension = group_min_rep_dimension(spec);
    let order = spec.order() as f64;
    let delta_prime = delta_prime.unwrap_or((min_dimension as f64).ln() / order.ln());
    let trace = trace_moment(spec, s, k)?;
    let tr = trace.to_f64().unwrap_or(f64::NAN);
    let lhs = lambda2.powi(2 * k as i32);
    let rhs = order.powf(-delta_prime) * tr;
    Ok(EigenBoundReport {
        k,
        lambda2,
        delta_prime,
        min_dimension,
        lhs,
        rhs,
        trace: trace.to_string(),
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}

#[cfg(test)]
mod tests;
