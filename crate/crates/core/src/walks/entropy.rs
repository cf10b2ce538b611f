use std::collections::BTreeMap;

use super::{Weight, WalkError, WalkMeasure};
use crate::groups::GroupElem;

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// `H_μ = -Σ μ(g) log μ(g)` (natural log, `0 log 0 = 0`).
pub fn entropy<W: Weight>(mu: &WalkMeasure<W>) -> f64 {
    mu.probabilities().into_iter().map(plogp).sum()
}

fn block_masses<W: Weight>(
    mu: &WalkMeasure<W>,
    label: &dyn Fn(&GroupElem) -> Option<u64>,
) -> Result<BTreeMap<u64, f64>, WalkError> {
    let mut blocks = BTreeMap::new();
    for ((g, _), p) in mu.support().iter().zip(mu.probabilities()) {
        let b = label(g).ok_or(WalkError::NotAPartition)?;
        *blocks.entry(b).or_insert(0.0) += p;
    }
    Ok(blocks)
}

/// `H_μ(A)` for the partition given by a block labelling; every support
/// element must get a label.
pub fn partition_entropy<W: Weight>(
    mu: &WalkMeasure<W>,
    a: &dyn Fn(&GroupElem) -> Option<u64>,
) -> Result<f64, WalkError> {
    Ok(block_masses(mu, a)?.into_values().map(plogp).sum())
}

/// `H_μ(A ∨ B)`.
pub fn join_entropy<W: Weight>(
    mu: &WalkMeasure<W>,
    a: &dyn Fn(&GroupElem) -> Option<u64>,
    b: &dyn Fn(&GroupElem) -> Option<u64>,
) -> Result<f64, WalkError> {
    let mut blocks: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for ((g, _), p) in mu.support().iter().zip(mu.probabilities()) {
        let ka = a(g).ok_or(WalkError::NotAPartition)?;
        let kb = b(g).ok_or(WalkError::NotAPartition)?;
        *blocks.entry((ka, kb)).or_insert(0.0) += p;
    }
    Ok(blocks.into_values().map(plogp).sum())
}

/// `H_μ(A | B) = Σ_B μ(B) H_{μ|B}(A)`, computed from the conditional measures.
pub fn conditional_entropy<W: Weight>(
    mu: &WalkMeasure<W>,
    a: &dyn Fn(&GroupElem) -> Option<u64>,
    b: &dyn Fn(&GroupElem) -> Option<u64>,
) -> Result<f64, WalkError> {
    let b_mass = block_masses(mu, b)?;
    let mut joint: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for ((g, _), p) in mu.support().iter().zip(mu.probabilities()) {
        let ka = a(g).ok_or(WalkError::NotAPartition)?;
        let kb = b(g).ok_or(WalkError::NotAPartition)?;
        *joint.entry((kb, ka)).or_insert(0.0) += p;
    }
    Ok(joint
        .into_iter()
        .map(|((kb, _), p)| {
            let mb = b_mass[&kb];
            mb * plogp(p / mb)
        })
        .sum())
}
