use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{FloatMeasure, Weight, WalkError, WalkMeasure, DEFAULT_BUDGET};
use crate::groups::GroupElem;

#[derive(Debug, Clone, Serialize)]
pub struct BsgReport {
    pub level_mu: i64,
    pub level_nu: i64,
    pub level_size: usize,
    /// Level-pair quantity `2^{i+j}‖μ‖²‖ν‖²|A_i||B_j|‖χ_{A_i}∗χ_{B_j}‖₂` and its pass threshold.
    pub quantity: f64,
    pub threshold: f64,
    pub c: f64,
    pub size: usize,
    pub triple_size: usize,
    pub triple_ratio: f64,
    /// `min_{g∈S} (μ̃∗μ)(g) · |S|`.
    pub min_mass_times_size: f64,
    #[serde(skip)]
    pub set: Vec<GroupElem>,
}

fn levels(mu: &FloatMeasure, norm_sq: f64, range: i64) -> HashMap<i64, Vec<GroupElem>> {
    let mut out: HashMap<i64, Vec<GroupElem>> = HashMap::new();
    for ((g, _), p) in mu.support().iter().zip(mu.probabilities()) {
        // 2^{i-1}‖μ‖² < μ(g) ≤ 2^i‖μ‖²
        let i = (p / norm_sq).log2().ceil() as i64;
        if i.abs() < range {
            out.entry(i).or_default().push(g.clone());
        }
    }
    out
}

/// Level-set extraction of an approximate-subgroup witness from a pair of
/// measures whose convolution flattens slowly. The level set `A_i` itself
/// plays the role of the refined set `A`.
pub fn bsg_extract<W: Weight>(
    mu: &WalkMeasure<W>,
    nu: &WalkMeasure<W>,
    k: f64,
) -> Result<BsgReport, WalkError> {
    if k <= 2.0 {
        return Err(WalkError::InvalidParameter("K must exceed 2".into()));
    }
    let spec = mu.spec().clone();
    let mu = to_float(mu);
    let nu = to_float(nu);
    let nm2 = mu.l2_squared();
    let nn2 = nu.l2_squared();
    let conv = mu.convolve(&nu, DEFAULT_BUDGET)?.l2_f64();
    let target = (nm2.sqrt() * nn2.sqrt()).sqrt() / k;
    if conv <= target {
        return Err(WalkError::HypothesisNotMet);
    }
    let range = (10.0 * k.ln()).ceil() as i64;
    let a_levels = levels(&mu, nm2, range);
    let b_levels = levels(&nu, nn2, range);
    let pairs = ((2 * range - 1) * (2 * range - 1)) as f64;
    let tail = k.powi(-5) * (nm2.sqrt() + nn2.sqrt());
    let threshold = (target - tail).max(0.0) / pairs;

    let mut keys_a: Vec<&i64> = a_levels.keys().collect();
    let mut keys_b: Vec<&i64> = b_levels.keys().collect();
    keys_a.sort();
    keys_b.sort();
    let mut best: Option<(f64, i64, i64)> = None;
    for &i in &keys_a {
        for &j in &keys_b {
            let a = FloatMeasure::uniform(&spec, &a_levels[i]);
            let b = FloatMeasure::uniform(&spec, &b_levels[j]);
            let q = 2f64.powi((i + j) as i32)
                * nm2
                * nn2
                * a_levels[i].len() as f64
                * b_levels[j].len() as f64
                * a.convolve(&b, DEFAULT_BUDGET)?.l2_f64();
            if best.is_none_or(|(bq, _, _)| q > bq) {
                best = Some((q, *i, *j));
            }
        }
    }
    let Some((quantity, i, j)) = best else {
        return Err(WalkError::HypothesisNotMet);
    };
    if quantity < threshold {
        return Err(WalkError::HypothesisNotMet);
    }

    let a = &a_levels[&i];
    let a_set: HashSet<&GroupElem> = a.iter().collect();
    // |A ∩ A.{g}| = #{(x, y) ∈ A² : x⁻¹y = g}
    let mut overlap: HashMap<GroupElem, usize> = HashMap::new();
    let mut a_atilde: HashSet<GroupElem> = HashSet::new();
    for x in a {
        let xi = spec.inv(x);
        for y in a {
            *overlap.entry(spec.mul(&xi, y)).or_default() += 1;
            a_atilde.insert(spec.mul(x, &spec.inv(y)));
        }
    }
    debug_assert!(a.iter().all(|x| a_set.contains(x)));
    let c = 2.0 * a_atilde.len() as f64 / a.len() as f64;
    let cut = a.len() as f64 / c;
    let mut set: Vec<GroupElem> = overlap
        .into_iter()
        .filter(|(_, n)| *n as f64 > cut)
        .map(|(g, _)| g)
        .collect();
    set.sort_unstable();

    let s2: HashSet<GroupElem> = set.iter().flat_map(|x| set.iter().map(|y| spec.mul(x, y))).collect();
    let s3: HashSet<GroupElem> = s2.iter().flat_map(|x| set.iter().map(|y| spec.mul(x, y))).collect();
    let corr = mu.reflect().convolve(&mu, DEFAULT_BUDGET)?;
    let min_mass = set.iter().map(|g| corr.get_f64(g)).fold(f64::INFINITY, f64::min);
    Ok(BsgReport {
        level_mu: i,
        level_nu: j,
        level_size: a.len(),
        quantity,
        threshold,
        c,
        size: set.len(),
        triple_size: s3.len(),
        triple_ratio: s3.len() as f64 / set.len() as f64,
        min_mass_times_size: min_mass * set.len() as f64,
        set,
    })
}

fn to_float<W: Weight>(mu: &WalkMeasure<W>) -> FloatMeasure {
    FloatMeasure::from_weights(
        mu.spec(),
        mu.support().iter().map(|(g, _)| g.clone()).zip(mu.probabilities()),
        1.0,
    )
}
