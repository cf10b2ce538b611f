use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use super::{entropy, ExactMeasure, WalkError, DEFAULT_BUDGET};
use crate::groups::{GroupElem, GroupSpec};

#[derive(Debug, Clone, Serialize)]
pub struct FlatRow {
    pub k: usize,
    /// `‖χ^{(k)}‖₂² = l2sq_num / l2sq_den` exactly.
    pub l2sq_num: String,
    pub l2sq_den: String,
    pub l2: f64,
    pub entropy: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatteningTrace {
    pub order: String,
    pub epsilon: f64,
    /// `|G|^{-1/2+ε}`.
    pub target: f64,
    pub rows: Vec<FlatRow>,
    /// First `k` with `‖χ^{(k)}‖₂ ≤ target`.
    pub k_star: Option<usize>,
    pub k_star_over_log: Option<f64>,
}

impl FlatteningTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,l2sq_num,l2sq_den,entropy,support\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{:.12},{}", r.k, r.l2sq_num, r.l2sq_den, r.entropy, r.support)
                .unwrap();
        }
        out
    }
}

/// Exact `χ_S^{(k)}` for `k = 1, 2, …` until the `L²` target is met or `k_max`.
pub fn flattening_trace(
    spec: &GroupSpec,
    s: &[GroupElem],
    k_max: usize,
    epsilon: f64,
) -> Result<FlatteningTrace, WalkError> {
    if s.is_empty() {
        return Err(WalkError::EmptySet);
    }
    let order = spec.order() as f64;
    let target = order.powf(-0.5 + epsilon);
    let step = ExactMeasure::from_multiset(spec, s);
    let mut mu = ExactMeasure::point(spec, &spec.identity());
    let mut rows = Vec::new();
    let mut k_star = None;
    for k in 1..=k_max {
        mu = mu.convolve(&step, DEFAULT_BUDGET)?;
        let (num, den): (BigUint, BigUint) = mu.l2_squared_parts();
        let l2 = mu.l2_f64();
        rows.push(FlatRow {
            k,
            l2sq_num: num.to_string(),
            l2sq_den: den.to_string(),
            l2,
            entropy: entropy(&mu),
            support: mu.support_len(),
        });
        if l2 <= target {
            k_star = Some(k);
            break;
        }
    }
    Ok(FlatteningTrace {
        order: spec.order().to_string(),
        epsilon,
        target,
        rows,
        k_star,
        k_star_over_log: k_star.map(|k| k as f64 / order.ln()),
    })
}
