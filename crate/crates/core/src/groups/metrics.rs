use std::collections::HashMap;

use super::{GroupElem, GroupError, GroupSpec};

/// `d(g, h) = Σ log|G_i|` over the factors where the projections of `g` and `h` differ.
pub fn factorwise_distance(
    spec: &GroupSpec,
    g: &GroupElem,
    h: &GroupElem,
) -> Result<f64, GroupError> {
    spec.check_elem(g)?;
    spec.check_elem(h)?;
    let mut dist = 0.0;
    for i in 0..spec.num_factors() {
        let target = spec.factor_group(i)?;
        if spec.project_into(g, &[i], &target) != spec.project_into(h, &[i], &target) {
            dist += (spec.factor_order(i) as f64).ln();
        }
    }
    Ok(dist)
}

/// `[G : C(g)]`, computed factor by factor since `C(g) = ∏ C(π_i g)`.
pub fn centralizer_index(spec: &GroupSpec, g: &GroupElem, cap: u128) -> Result<u128, GroupError> {
    spec.check_elem(g)?;
    let mut index = 1u128;
    for i in 0..spec.num_factors() {
        let target = spec.factor_group(i)?;
        let gi = spec.project_into(g, &[i], &target);
        let all = target.enumerate(cap)?;
        let c = all.iter().filter(|h| target.commutes(&gi, h)).count() as u128;
        index *= target.order() / c;
    }
    Ok(index)
}

/// Each factor type `(p, k)` occurs at most `r` times among the CRT factors.
pub fn factor_multiplicity_ok(spec: &GroupSpec, r: usize) -> bool {
    let mut counts: HashMap<(u64, usize), usize> = HashMap::new();
    for f in spec.ring().fields() {
        *counts.entry((f.characteristic(), f.degree())).or_default() += 1;
    }
    counts.values().all(|&c| c <= r)
}
