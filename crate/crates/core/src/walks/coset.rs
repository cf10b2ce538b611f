use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::{Weight, WalkError, WalkMeasure, DEFAULT_BUDGET};
use crate::groups::{GroupElem, GroupSpec, SubgroupDescriptor};

/// Support size above which the quadratic coset grouping is refused.
const QUADRATIC_COSET_CAP: usize = 20_000;

/// `μ(gH)`.
pub fn coset_mass<W: Weight>(
    mu: &WalkMeasure<W>,
    h: &SubgroupDescriptor,
    g: &GroupElem,
) -> W::Ratio {
    let spec = mu.spec();
    let gi = spec.inv(g);
    mu.mass_where(|x| h.contains(&spec.mul(&gi, x)))
}

/// `max_g μ(gH)` and a representative attaining it.
pub fn coset_mass_max<W: Weight>(
    mu: &WalkMeasure<W>,
    h: &SubgroupDescriptor,
) -> Result<(W::Ratio, GroupElem), WalkError> {
    let spec = mu.spec();
    let mut mass: HashMap<GroupElem, W> = HashMap::new();
    if let Some(elems) = h.sorted_elements() {
        // canonical representative: least element of xH
        for (x, w) in mu.support() {
            let key = elems.iter().map(|e| spec.mul(x, e)).min().expect("nonempty subgroup");
            mass.entry(key).or_insert_with(W::zero).add_assign(w);
        }
    } else {
        if mu.support_len() > QUADRATIC_COSET_CAP {
            return Err(WalkError::BudgetExceeded {
                work: mu.support_len() as u128,
                budget: QUADRATIC_COSET_CAP as u128,
            });
        }
        let mut reps: Vec<GroupElem> = Vec::new();
        for (x, w) in mu.support() {
            let rep = reps
                .iter()
                .find(|r| h.contains(&spec.mul(&spec.inv(r), x)))
                .cloned()
                .unwrap_or_else(|| {
                    reps.push(x.clone());
                    x.clone()
                });
            mass.entry(rep).or_insert_with(W::zero).add_assign(w);
        }
    }
    let mut entries: Vec<(GroupElem, W)> = mass.into_iter().collect();
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut best: Option<(W::Ratio, GroupElem)> = None;
    for (rep, w) in entries {
        let r = W::ratio(&w, mu.denominator());
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, rep));
        }
    }
    Ok(best.unwrap_or_else(|| (W::ratio_zero(), spec.identity())))
}

#[derive(Debug, Clone, Serialize)]
pub struct EscapeRow {
    pub l: usize,
    pub mass: f64,
    pub mass_num: String,
    pub mass_den: String,
    /// `-log χ^{(l)}(H) / log [G:H]` (infinite when the mass is zero).
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EscapeProfile {
    pub index: String,
    pub rows: Vec<EscapeRow>,
    /// Least-squares `δ` in `log χ^{(l)}(H) ≈ -δ log[G:H]` over rows with positive mass.
    pub delta_fit: f64,
    /// Mass is non-increasing along the rows.
    pub monotone: bool,
    /// Some row has mass below 1.
    pub escapes: bool,
    /// Last row satisfies `χ^{(l)}(H) ≤ [G:H]^{-δ_fit}` with constant 1.
    pub below_fit_at_end: bool,
}

/// `χ_S^{(l)}(H)` for each requested `l` (even values expected), exactly.
pub fn escape_profile(
    spec: &GroupSpec,
    s: &[GroupElem],
    h: &SubgroupDescriptor,
    ls: &[usize],
) -> Result<EscapeProfile, WalkError> {
    if h.is_full() {
        return Err(WalkError::NotProper);
    }
    let mut ls = ls.to_vec();
    ls.sort_unstable();
    ls.dedup();
    let index = h.index();
    let log_index = (index as f64).ln();
    let step = WalkMeasure::<BigUint>::from_multiset(spec, s);
    let mut mu = WalkMeasure::<BigUint>::point(spec, &spec.identity());
    let mut done = 0;
    let mut rows = Vec::new();
    for &l in &ls {
        while done < l {
            mu = mu.convolve(&step, DEFAULT_BUDGET)?;
            done += 1;
        }
        let mass = mu.mass_where(|x| h.contains(x));
        let mf = BigUint::ratio_f64(&mass);
        rows.push(EscapeRow {
            l,
            mass: mf,
            mass_num: mass.numer().to_string(),
            mass_den: mass.denom().to_string(),
            delta: if mf > 0.0 { -mf.ln() / log_index } else { f64::INFINITY },
        });
    }
    let finite: Vec<f64> = rows.iter().filter(|r| r.mass > 0.0).map(|r| r.delta).collect();
    let delta_fit = if finite.is_empty() {
        f64::INFINITY
    } else {
        finite.iter().sum::<f64>() / finite.len() as f64
    };
    let monotone = rows.windows(2).all(|w| w[1].mass <= w[0].mass);
    let escapes = rows.iter().any(|r| r.mass < 1.0);
    let below_fit_at_end = rows
        .last()
        .is_some_and(|r| r.mass <= (index as f64).powf(-delta_fit) * (1.0 + 1e-12));
    Ok(EscapeProfile {
        index: index.to_string(),
        rows,
        delta_fit,
        monotone,
        escapes,
        below_fit_at_end,
    })
}
