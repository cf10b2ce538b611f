use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::GrowthError;
use crate::groups::{GroupElem, GroupSpec};
use crate::spectral::group_min_rep_dimension;

/// `|S| > |G|^{1-ε}` puts a set outside the tripling regime.
pub const REGIME_EPSILON: f64 = 0.1;

/// `A.B = {ab}`, sorted. Fails once the result exceeds `cap`.
pub fn product_set(
    spec: &GroupSpec,
    a: &[GroupElem],
    b: &[GroupElem],
    cap: usize,
) -> Result<Vec<GroupElem>, GrowthError> {
    let set: HashSet<GroupElem> = a
        .par_iter()
        .fold(HashSet::new, |mut acc, x| {
            acc.extend(b.iter().map(|y| spec.mul(x, y)));
            acc
        })
        .reduce(HashSet::new, |mut x, y| {
            if x.len() < y.len() {
                return union(y, x);
            }
            x.extend(y);
            x
        });
    if set.len() > cap {
        return Err(GrowthError::TooLarge { size: set.len(), cap });
    }
    let mut out: Vec<GroupElem> = set.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

fn union(mut big: HashSet<GroupElem>, small: HashSet<GroupElem>) -> HashSet<GroupElem> {
    big.extend(small);
    big
}

/// `∏_k S = S.S…S` (`k ≥ 1` factors), sorted.
pub fn iterated_product(
    spec: &GroupSpec,
    s: &[GroupElem],
    k: usize,
    cap: usize,
) -> Result<Vec<GroupElem>, GrowthError> {
    Ok(iterated_products(spec, s, k, cap)?.pop().expect("k ≥ 1"))
}

/// `[∏_1 S, …, ∏_k S]`.
fn iterated_products(
    spec: &GroupSpec,
    s: &[GroupElem],
    k: usize,
    cap: usize,
) -> Result<Vec<Vec<GroupElem>>, GrowthError> {
    let mut base = s.to_vec();
    base.sort_unstable();
    base.dedup();
    let mut out = vec![base.clone()];
    for _ in 1..k.max(1) {
        let next = product_set(spec, out.last().expect("nonempty"), &base, cap)?;
        out.push(next);
    }
    Ok(out)
}

fn is_symmetric(spec: &GroupSpec, s: &[GroupElem]) -> bool {
    let set: HashSet<&GroupElem> = s.iter().collect();
    s.iter().all(|x| set.contains(&spec.inv(x)))
}

#[derive(Debug, Clone, Serialize)]
pub struct IteratedCheck {
    pub k: usize,
    pub size: usize,
    /// `|∏_k S|·|S|^{k-3} ≤ |S.S.S|^{k-2}`, compared exactly.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub size_1: usize,
    pub size_3: usize,
    pub sizes_k: BTreeMap<usize, usize>,
    /// `log(|S.S.S|/|S|) / log min(|S|, |G|/|S|)`, zero when the base is at most 1.
    pub delta_hat: f64,
    pub regime_ok: bool,
    pub iterated: Vec<IteratedCheck>,
}

/// Exact product-set sizes and the iterated-product inequality
/// `|∏_k S|/|S| ≤ (|S.S.S|/|S|)^{k-2}` for each requested `k ≥ 3`.
pub fn tripling_report(
    spec: &GroupSpec,
    s: &[GroupElem],
    ks: &[usize],
    cap: usize,
) -> Result<GrowthReport, GrowthError> {
    if s.is_empty() {
        return Err(GrowthError::EmptyResult);
    }
    if !is_symmetric(spec, s) {
        return Err(GrowthError::NotSymmetric);
    }
    let k_max = ks.iter().copied().max().unwrap_or(3).max(3);
    let products = iterated_products(spec, s, k_max, cap)?;
    let n1 = products[0].len();
    let n3 = products[2].len();
    let order = spec.order() as f64;
    let base = (n1 as f64).min(order / n1 as f64);
    let delta_hat = if base > 1.0 {
        (n3 as f64 / n1 as f64).ln() / base.ln()
    } else {
        0.0
    };
    let mut sizes_k = BTreeMap::new();
    let mut iterated = Vec::new();
    for &k in ks {
        if k == 0 {
            continue;
        }
        let size = products[k - 1].len();
        sizes_k.insert(k, size);
        if k >= 3 {
            let lhs = BigUint::from(size) * BigUint::from(n1).pow(k as u32 - 3);
            let rhs = BigUint::from(n3).pow(k as u32 - 2);
            iterated.push(IteratedCheck { k, size, holds: lhs <= rhs });
        }
    }
    Ok(GrowthReport {
        size_1: n1,
        size_3: n3,
        sizes_k,
        delta_hat,
        regime_ok: (n1 as f64) <= order.powf(1.0 - REGIME_EPSILON),
        iterated,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    /// `|A||B||C|·d_min > |G|³`, `d_min` the smallest nontrivial representation dimension.
    pub threshold_met: bool,
    pub full_cover: bool,
    pub product_size: usize,
}

/// Whether `A.B.C = G`, against the quasirandomness threshold `|G|³/d_min`.
pub fn gowers_cover_check(
    spec: &GroupSpec,
    a: &[GroupElem],
    b: &[GroupElem],
    c: &[GroupElem],
    cap: usize,
) -> Result<CoverReport, GrowthError> {
    let order = spec.order();
    if order > cap as u128 {
        return Err(GrowthError::TooLarge {
            size: usize::try_from(order).unwrap_or(usize::MAX),
            cap,
        });
    }
    let dedup = |x: &[GroupElem]| x.iter().collect::<HashSet<_>>().len();
    let lhs = BigUint::from(dedup(a)) * dedup(b) * dedup(c) * group_min_rep_dimension(spec);
    let threshold_met = lhs > BigUint::from(order).pow(3);
    let ab = product_set(spec, a, b, cap)?;
    let abc = product_set(spec, &ab, c, cap)?;
    Ok(CoverReport {
        threshold_met,
        full_cover: abc.len() as u128 == order,
        product_size: abc.len(),
    })
}
